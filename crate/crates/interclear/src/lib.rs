//! Clearing equilibria and minimum bailouts for interbank debt networks.
//!
//! The library models a set of banks holding debt claims on each other,
//! computes the mutually consistent book-value equilibria that arise when
//! insolvency carries bankruptcy costs (including the best and the worst
//! equilibrium of the lattice), characterizes which banks stay solvent in
//! each, and solves for minimum-cost regulator interventions: ordered
//! capital injections and guaranteed-payment sets that restore systemic
//! solvency.
//!
//! All arithmetic is exact rational; nothing in the solver path rounds.

pub mod bailout;
pub mod clearing;
pub mod cycles;
pub mod document;
pub mod dot;
pub mod generate;
pub mod network;
pub mod rational;
pub mod solvency;
pub mod structured;

#[cfg(test)]
pub(crate) mod testnets;

pub use network::{
    BalanceReport, BankBalance, BankId, BankSet, BankruptcyCosts, FinancialNetwork,
    NetworkBuilder, NetworkError, RawNetwork, Reduction,
};
pub use rational::{Amount, Rational, Value};
