//! Solvency cascades and systemic-solvency diagnostics.
//!
//! The cascade closure S(X) collects every bank made solvent, directly or
//! through repayment chains, once the banks in X pay their debts in full.
//! With X empty it yields the maximum iteratively strongly solvent set,
//! which is exactly the solvent set of the worst equilibrium under full
//! bankruptcy costs. A bank counts as solvent on the boundary (`>=`).

use crate::cycles::{simple_cycles_capped, CycleError, CycleSet, DEFAULT_CYCLE_CAP};
use crate::network::{BankSet, FinancialNetwork};

/// Layers of the iterative solvency construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolvencyTrace {
    /// The seed set X (assumed solvent regardless of income).
    pub base: BankSet,
    /// `layers[l]` holds the banks first made solvent at stage l.
    pub layers: Vec<BankSet>,
    /// `S(X)`: the base plus every layer.
    pub union: BankSet,
}

impl SolvencyTrace {
    pub fn covers_all(&self, net: &FinancialNetwork) -> bool {
        self.union.len() == net.bank_count()
    }
}

/// Computes `S(X)`: banks solvent given full payments from the closure so
/// far, iterated to a fixed point, layers recorded.
pub fn cascade_closure(net: &FinancialNetwork, base: &BankSet) -> SolvencyTrace {
    let mut union = base.clone();
    let mut layers = Vec::new();
    loop {
        let layer: BankSet = net
            .bank_ids()
            .filter(|bank| !union.contains(bank))
            .filter(|&bank| {
                let mut assets = net.portfolio(bank).ratio().clone();
                for (debtor, amount) in net.claims_of(bank) {
                    if union.contains(debtor) {
                        assets += amount.ratio();
                    }
                }
                &assets >= net.debt_liabilities(bank).ratio()
            })
            .collect();
        if layer.is_empty() {
            break;
        }
        union.extend(layer.iter().copied());
        layers.push(layer);
    }
    SolvencyTrace { base: base.clone(), layers, union }
}

/// The maximum iteratively strongly solvent set: `S(∅)`. Its first layer is
/// the unilaterally solvent banks.
pub fn max_iteratively_solvent(net: &FinancialNetwork) -> SolvencyTrace {
    cascade_closure(net, &BankSet::new())
}

/// Systemic-solvency diagnosis. Computed under the full-cost reading of the
/// worst equilibrium; the flags depend only on portfolios and face values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolvencyDiagnosis {
    pub weakly_balanced: bool,
    pub unilaterally_solvent: BankSet,
    pub max_iss: SolvencyTrace,
    /// Simple-cycle indices not intersected by the maximum iteratively
    /// strongly solvent set.
    pub uncovered_cycles: Vec<usize>,
    /// All banks solvent in the best equilibrium (iff weakly balanced).
    pub best_all_solvent: bool,
    /// All banks solvent in the worst equilibrium (iff weakly balanced and
    /// every simple cycle is covered).
    pub worst_all_solvent: bool,
    /// Every bank lying on two or more cycles is critically balanced; in
    /// that regime worst-equilibrium solvency additionally requires a
    /// unilaterally solvent bank on each cycle.
    pub multi_cycle_banks_critical: bool,
    pub unilateral_on_every_cycle: bool,
    pub cycles: CycleSet,
}

pub fn diagnose(net: &FinancialNetwork) -> Result<SolvencyDiagnosis, CycleError> {
    diagnose_capped(net, DEFAULT_CYCLE_CAP)
}

pub fn diagnose_capped(
    net: &FinancialNetwork,
    cycle_cap: usize,
) -> Result<SolvencyDiagnosis, CycleError> {
    let cycles = simple_cycles_capped(net, cycle_cap)?;
    let report = net.balance_report();
    let weakly_balanced = report.all_weakly_balanced;
    let unilaterally_solvent = report.unilaterally_solvent_set();
    let max_iss = max_iteratively_solvent(net);
    let uncovered_cycles: Vec<usize> = (0..cycles.count())
        .filter(|&k| !cycles.cycle(k).banks.iter().any(|b| max_iss.union.contains(b)))
        .collect();
    let multi_cycle_banks_critical = cycles
        .multi_cycle_banks()
        .iter()
        .all(|&b| report.bank(b).critically_balanced);
    let unilateral_on_every_cycle = (0..cycles.count())
        .all(|k| cycles.cycle(k).banks.iter().any(|b| unilaterally_solvent.contains(b)));
    Ok(SolvencyDiagnosis {
        weakly_balanced,
        best_all_solvent: weakly_balanced,
        worst_all_solvent: weakly_balanced && uncovered_cycles.is_empty(),
        unilaterally_solvent,
        max_iss,
        uncovered_cycles,
        multi_cycle_banks_critical,
        unilateral_on_every_cycle,
        cycles,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{BankId, NetworkBuilder};
    use crate::rational::{parse_amount, Amount};
    use crate::testnets;

    fn amt(s: &str) -> Amount {
        parse_amount(s).unwrap()
    }

    fn set(ids: &[u32]) -> BankSet {
        ids.iter().map(|&i| BankId(i)).collect()
    }

    #[test]
    fn cascade_from_bank2_clears_appendix_b1() {
        let net = testnets::appendix_b1();
        let trace = cascade_closure(&net, &set(&[2]));
        assert_eq!(trace.union, set(&[1, 2, 3, 4]));
        assert_eq!(trace.layers, vec![set(&[1, 3]), set(&[4])]);
    }

    #[test]
    fn empty_base_without_unilateral_stays_empty() {
        let net = testnets::appendix_b1();
        let trace = max_iteratively_solvent(&net);
        assert!(trace.union.is_empty());
        assert!(trace.layers.is_empty());
    }

    #[test]
    fn chain_unravels_from_bank1() {
        let net = testnets::cycle_chain(4, amt("2"), amt("1"));
        let trace = cascade_closure(&net, &set(&[1]));
        assert!(trace.covers_all(&net));
        assert_eq!(trace.layers, vec![set(&[2]), set(&[3]), set(&[4])]);
    }

    #[test]
    fn figure1_max_iss_is_bank1() {
        let trace = max_iteratively_solvent(&testnets::figure1());
        assert_eq!(trace.union, set(&[1]));
    }

    #[test]
    fn all_unilaterally_solvent_closure_is_everything() {
        let net = NetworkBuilder::new(2)
            .portfolio(1, amt("2"))
            .portfolio(2, amt("2"))
            .debt(1, 2, amt("1"))
            .debt(2, 1, amt("1"))
            .build()
            .unwrap();
        assert!(max_iteratively_solvent(&net).covers_all(&net));
    }

    #[test]
    fn closure_is_monotone_and_idempotent() {
        let net = testnets::figure4();
        let small = cascade_closure(&net, &set(&[3]));
        let large = cascade_closure(&net, &set(&[3, 5]));
        assert!(small.union.is_subset(&large.union));
        let again = cascade_closure(&net, &small.union);
        assert_eq!(again.union, small.union);
    }

    #[test]
    fn diagnose_appendix_b1() {
        let d = diagnose(&testnets::appendix_b1()).unwrap();
        assert!(d.weakly_balanced);
        assert!(d.best_all_solvent);
        assert!(!d.worst_all_solvent);
        assert_eq!(d.cycles.count(), 3);
        assert_eq!(d.uncovered_cycles, vec![0, 1, 2]);
    }

    #[test]
    fn diagnose_figure4_after_rebalancing() {
        let net = testnets::figure4();
        let rebalanced = net.with_injections(&net.imbalance_injections());
        let d = diagnose(&rebalanced).unwrap();
        assert!(d.weakly_balanced);
        assert_eq!(d.max_iss.union, set(&[1]));
        // none of the three simple cycles {2,3}, {3,4}, {4,5} touches bank 1
        assert_eq!(d.uncovered_cycles.len(), d.cycles.count());
        assert!(!d.worst_all_solvent);
    }

    #[test]
    fn compressed_weakly_balanced_network_is_safe_everywhere() {
        let net = testnets::figure1().compress();
        let d = diagnose(&net).unwrap();
        assert!(d.weakly_balanced);
        assert!(d.worst_all_solvent);
        assert!(d.uncovered_cycles.is_empty());
    }

    #[test]
    fn corollary2_fields_on_figure1() {
        // bank 2 is the only multi-cycle bank and it is exactly balanced,
        // hence critically balanced; the right cycle has no unilaterally
        // solvent bank
        let d = diagnose(&testnets::figure1()).unwrap();
        assert!(d.multi_cycle_banks_critical);
        assert!(!d.unilateral_on_every_cycle);
        assert!(!d.worst_all_solvent);
    }
}
