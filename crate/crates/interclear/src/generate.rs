//! Network generators for the structures studied by the solver, plus a
//! seed-deterministic random generator and the partition-problem translator.

use std::fmt;

use num_bigint::BigInt;

use crate::network::{BankruptcyCosts, FinancialNetwork, NetworkBuilder};
use crate::rational::{Amount, Rational};

/// Uniform rational range: numerators `min_num..=max_num` over a fixed
/// denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatRange {
    pub min_num: u64,
    pub max_num: u64,
    pub den: u64,
}

impl RatRange {
    pub fn new(min_num: u64, max_num: u64, den: u64) -> Self {
        RatRange { min_num, max_num, den }
    }

    fn sample(&self, rng: &mut SplitMix64) -> Amount {
        let span = self.max_num - self.min_num + 1;
        let num = self.min_num + rng.next() % span;
        Amount::new(Rational::new(BigInt::from(num), BigInt::from(self.den)))
            .expect("nonnegative by construction")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorSpec {
    /// A single debt cycle: bank i owes `debt` to bank i+1, bank n closes the
    /// wheel back to bank 1. Every bank holds the same portfolio.
    Wheel { banks: usize, debt: Amount, portfolio: Amount },
    /// Center bank n; every peripheral i < n owes `d_in` to the center and
    /// holds a claim of `d_out` on it. `portfolios` has length n, peripherals
    /// first, center last.
    Star { banks: usize, d_in: Amount, d_out: Amount, portfolios: Vec<Amount> },
    /// A clique of core banks symmetrically exposed by `d_core`, each core
    /// bank owing `d_out` to (and claiming `d_in` from) its own `n_periph`
    /// peripheral banks. All peripherals share the portfolio `p_periph`.
    CorePeriphery {
        n_core: usize,
        n_periph: usize,
        d_core: Amount,
        d_in: Amount,
        d_out: Amount,
        p_core: Vec<Amount>,
        p_periph: Amount,
    },
    /// Chain of two-cycles: i owes `d_hi` to i+1 and i+1 owes `d_lo` back.
    /// Portfolios are 0 at the ends and `d_lo` in the middle.
    CycleChain { banks: usize, d_hi: Amount, d_lo: Amount },
    /// Seed-deterministic random digraph: each ordered pair carries a debt
    /// with probability `edge_percent`/100, amounts and portfolios drawn
    /// uniformly from the given ranges.
    Random { banks: usize, edge_percent: u32, amount: RatRange, portfolio: RatRange, seed: u64 },
    /// Bilateral star encoding of a partition instance: peripheral i owes
    /// a_i to the center and is owed a_i back, with p_i = a_i(M-1)/M, and the
    /// center's shortfall is half the multiset sum. Requires M > 2*sum.
    FromPartition { values: Vec<u64>, scale: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenerateError {
    BadParameter(String),
}

impl fmt::Display for GenerateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenerateError::BadParameter(msg) => write!(f, "bad generator parameter: {msg}"),
        }
    }
}

impl std::error::Error for GenerateError {}

pub fn generate(spec: &GeneratorSpec) -> Result<FinancialNetwork, GenerateError> {
    let bad = |msg: &str| Err(GenerateError::BadParameter(msg.to_string()));
    match spec {
        GeneratorSpec::Wheel { banks, debt, portfolio } => {
            if *banks < 2 {
                return bad("wheel needs at least 2 banks");
            }
            if debt.is_zero() {
                return bad("wheel debt must be positive");
            }
            let mut b = NetworkBuilder::new(*banks);
            for i in 1..=*banks as u32 {
                let next = if i == *banks as u32 { 1 } else { i + 1 };
                b = b.debt(i, next, debt.clone()).portfolio(i, portfolio.clone());
            }
            Ok(b.build().expect("wheel is valid"))
        }
        GeneratorSpec::Star { banks, d_in, d_out, portfolios } => {
            if *banks < 2 {
                return bad("star needs a center and at least one peripheral");
            }
            if portfolios.len() != *banks {
                return bad("star portfolio vector must cover every bank");
            }
            if d_in.is_zero() || d_out.is_zero() {
                return bad("star exposures must be positive");
            }
            let center = *banks as u32;
            let mut b = NetworkBuilder::new(*banks).portfolios(portfolios.clone());
            for i in 1..center {
                b = b.debt(i, center, d_in.clone()).debt(center, i, d_out.clone());
            }
            Ok(b.build().expect("star is valid"))
        }
        GeneratorSpec::CorePeriphery { n_core, n_periph, d_core, d_in, d_out, p_core, p_periph } => {
            if *n_core < 1 {
                return bad("core-periphery needs at least one core bank");
            }
            if p_core.len() != *n_core {
                return bad("core portfolio vector must cover every core bank");
            }
            if *n_core >= 2 && d_core.is_zero() {
                return bad("core exposure must be positive");
            }
            if *n_periph > 0 && (d_in.is_zero() || d_out.is_zero()) {
                return bad("peripheral exposures must be positive");
            }
            let n = n_core + n_core * n_periph;
            let mut b = NetworkBuilder::new(n);
            for (i, p) in p_core.iter().enumerate() {
                b = b.portfolio(i as u32 + 1, p.clone());
            }
            for i in 1..=*n_core as u32 {
                for j in 1..=*n_core as u32 {
                    if i != j {
                        b = b.debt(i, j, d_core.clone());
                    }
                }
                for k in 0..*n_periph as u32 {
                    let q = *n_core as u32 + (i - 1) * *n_periph as u32 + k + 1;
                    b = b
                        .debt(q, i, d_in.clone())
                        .debt(i, q, d_out.clone())
                        .portfolio(q, p_periph.clone());
                }
            }
            Ok(b.build().expect("core-periphery is valid"))
        }
        GeneratorSpec::CycleChain { banks, d_hi, d_lo } => {
            if *banks < 2 {
                return bad("cycle chain needs at least 2 banks");
            }
            if d_hi.is_zero() || d_lo.is_zero() {
                return bad("cycle chain debts must be positive");
            }
            let mut b = NetworkBuilder::new(*banks);
            for i in 1..*banks as u32 {
                b = b.debt(i, i + 1, d_hi.clone()).debt(i + 1, i, d_lo.clone());
            }
            for i in 2..*banks as u32 {
                b = b.portfolio(i, d_lo.clone());
            }
            Ok(b.build().expect("cycle chain is valid"))
        }
        GeneratorSpec::Random { banks, edge_percent, amount, portfolio, seed } => {
            if *banks == 0 {
                return bad("random network needs at least one bank");
            }
            if *edge_percent > 100 {
                return bad("edge percentage above 100");
            }
            if amount.den == 0 || portfolio.den == 0 {
                return bad("zero denominator in range");
            }
            if amount.min_num > amount.max_num || portfolio.min_num > portfolio.max_num {
                return bad("empty range");
            }
            let mut rng = SplitMix64::new(*seed);
            let mut b = NetworkBuilder::new(*banks);
            for i in 1..=*banks as u32 {
                b = b.portfolio(i, portfolio.sample(&mut rng));
            }
            for d in 1..=*banks as u32 {
                for c in 1..=*banks as u32 {
                    if d == c {
                        continue;
                    }
                    let hit = rng.next() % 100 < *edge_percent as u64;
                    let amt = amount.sample(&mut rng);
                    if hit && !amt.is_zero() {
                        b = b.debt(d, c, amt);
                    }
                }
            }
            Ok(b.build().expect("random network is valid"))
        }
        GeneratorSpec::FromPartition { values, scale } => {
            if values.is_empty() {
                return bad("empty multiset");
            }
            if values.contains(&0) {
                return bad("partition values must be positive");
            }
            let sum: u64 = values.iter().sum();
            if *scale <= 2 * sum {
                return bad("scale must exceed twice the multiset sum");
            }
            let n = values.len();
            let center = n as u32 + 1;
            let m = BigInt::from(*scale);
            let mut b = NetworkBuilder::new(n + 1).costs(BankruptcyCosts::Full);
            for (k, &a) in values.iter().enumerate() {
                let i = k as u32 + 1;
                let ai = Amount::from_int(a);
                // p_i = a_i (M-1)/M, so the bailout cost of i is a_i/M
                let p = Rational::new(BigInt::from(a) * (&m - BigInt::from(1)), m.clone());
                b = b
                    .debt(i, center, ai.clone())
                    .debt(center, i, ai)
                    .portfolio(i, Amount::new(p).expect("positive"));
            }
            // center owes the multiset back in full; shortfall is sum/2
            let p_center = Rational::new(BigInt::from(sum), BigInt::from(2));
            b = b.portfolio(center, Amount::new(p_center).expect("positive"));
            Ok(b.build().expect("partition network is valid"))
        }
    }
}

/// SplitMix64: tiny deterministic generator, bit-identical across platforms.
#[derive(Debug, Clone)]
pub struct SplitMix64(u64);

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64(seed)
    }

    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform value in `lo..=hi`.
    pub fn range(&mut self, lo: u64, hi: u64) -> u64 {
        debug_assert!(lo <= hi);
        lo + self.next() % (hi - lo + 1)
    }
}
