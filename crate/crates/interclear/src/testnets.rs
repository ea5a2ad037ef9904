//! Worked networks shared by the unit tests.

pub use crate::generate::SplitMix64 as Rng;
use crate::generate::{generate, GeneratorSpec};
use crate::network::{BankruptcyCosts, FinancialNetwork, NetworkBuilder};
use crate::rational::{parse_amount, Amount, Rational};

fn amt(s: &str) -> Amount {
    parse_amount(s).unwrap()
}

/// Two reciprocal two-cycles sharing bank 2, p = (1, 0, 0), costs half the
/// asset value. Best equilibrium (1, 0, 0); worst (2/7, -10/7, -6/7).
pub fn figure1() -> FinancialNetwork {
    NetworkBuilder::new(3)
        .portfolio(1, amt("1"))
        .debt(1, 2, amt("1"))
        .debt(2, 1, amt("1"))
        .debt(2, 3, amt("1"))
        .debt(3, 2, amt("1"))
        .costs(BankruptcyCosts::canonical(Rational::new(1.into(), 2.into()), Amount::zero()))
        .build()
        .unwrap()
}

/// Chain of three two-cycles, p = (0, 1, 1, 0), full costs. Has exactly
/// three equilibria.
pub fn appendix_b1() -> FinancialNetwork {
    NetworkBuilder::new(4)
        .portfolio(2, amt("1"))
        .portfolio(3, amt("1"))
        .debt(1, 2, amt("1"))
        .debt(2, 1, amt("1"))
        .debt(2, 3, amt("3/4"))
        .debt(3, 2, amt("1/4"))
        .debt(3, 4, amt("1"))
        .debt(4, 3, amt("1"))
        .costs(BankruptcyCosts::Full)
        .build()
        .unwrap()
}

/// Five banks, p = (0, 0, 1, 1, 0): bank 1 is imbalanced by 1 and feeds a
/// chain of two-cycles. Used for the rebalance-then-reduce walkthrough.
pub fn figure4() -> FinancialNetwork {
    NetworkBuilder::new(5)
        .portfolio(3, amt("1"))
        .portfolio(4, amt("1"))
        .debt(1, 2, amt("1"))
        .debt(2, 3, amt("2"))
        .debt(3, 2, amt("1"))
        .debt(3, 4, amt("3/4"))
        .debt(4, 3, amt("1/4"))
        .debt(4, 5, amt("1"))
        .debt(5, 4, amt("1"))
        .costs(BankruptcyCosts::Full)
        .build()
        .unwrap()
}

/// Three banks, three simple cycles: (1,2), (1,3), (1,3,2).
pub fn figure3_right() -> FinancialNetwork {
    NetworkBuilder::new(3)
        .debt(1, 2, amt("1"))
        .debt(2, 1, amt("1"))
        .debt(1, 3, amt("1"))
        .debt(3, 1, amt("1"))
        .debt(3, 2, amt("1"))
        .costs(BankruptcyCosts::Full)
        .build()
        .unwrap()
}

pub fn wheel(n: usize, debt: Amount, portfolio: Amount) -> FinancialNetwork {
    generate(&GeneratorSpec::Wheel { banks: n, debt, portfolio }).unwrap()
}

pub fn cycle_chain(n: usize, d_hi: Amount, d_lo: Amount) -> FinancialNetwork {
    generate(&GeneratorSpec::CycleChain { banks: n, d_hi, d_lo }).unwrap()
}

/// Three banks where bailing 3 before 2 is strictly cheaper than the
/// reverse: hub bank 2 owes 5+5 against p=5, and bank 3's repayment of 4
/// shrinks the hub's shortfall from 5 to 1.
pub fn order_sensitive() -> FinancialNetwork {
    NetworkBuilder::new(3)
        .portfolio(2, amt("5"))
        .portfolio(3, amt("1"))
        .debt(1, 2, amt("5"))
        .debt(2, 1, amt("5"))
        .debt(2, 3, amt("5"))
        .debt(3, 2, amt("4"))
        .costs(BankruptcyCosts::Full)
        .build()
        .unwrap()
}
