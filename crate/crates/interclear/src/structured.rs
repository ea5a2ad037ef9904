//! Closed-form optimal bailout policies for special network shapes, plus
//! the detectors that route instances to them.
//!
//! Detectors demand exact parameter symmetry; anything slightly off falls
//! through to `General` and the exact solver. All policies here assume the
//! weakly balanced, full-cost regime in which they are provably optimal;
//! they are computed mechanically from the stated formulas.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::bailout::BailoutPolicy;
use crate::cycles::{cycle_tiers, simple_cycles_capped, DEFAULT_CYCLE_CAP};
use crate::network::{BankId, BankSet, FinancialNetwork};
use crate::rational::{Amount, Rational};
use crate::solvency::cascade_closure;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StructureTag {
    /// Every bank lies on at most one simple cycle (and there is at least one).
    DisjointCycles,
    /// One center owing `d_out` to each peripheral and owed `d_in` by each.
    Star { center: BankId, d_in: Amount, d_out: Amount },
    /// Complete symmetric clique with uniform exposure.
    Clique { d_core: Amount },
    /// Symmetric core clique, each core bank with its own equal-sized set of
    /// peripherals on uniform terms and a common peripheral portfolio.
    CorePeriphery { core: BankSet, d_core: Amount, d_in: Amount, d_out: Amount, n_periph: usize },
    General,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureError {
    pub needed: &'static str,
}

impl fmt::Display for StructureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "network does not have the {} structure", self.needed)
    }
}

impl std::error::Error for StructureError {}

/// Returns the most specific matching tag.
pub fn detect_structure(net: &FinancialNetwork) -> StructureTag {
    if let Ok(cycles) = simple_cycles_capped(net, DEFAULT_CYCLE_CAP) {
        if !cycles.is_empty() && cycles.multi_cycle_banks().is_empty() {
            return StructureTag::DisjointCycles;
        }
    }
    if let Some((center, d_in, d_out)) = star_params(net) {
        return StructureTag::Star { center, d_in, d_out };
    }
    if let Some(d_core) = clique_params(net) {
        return StructureTag::Clique { d_core };
    }
    if let Some(cp) = core_periphery_params(net) {
        return StructureTag::CorePeriphery {
            core: cp.cores.iter().copied().collect(),
            d_core: cp.d_core.expect("multi-bank core"),
            d_in: cp.d_in.expect("has peripherals"),
            d_out: cp.d_out.expect("has peripherals"),
            n_periph: cp.n_periph,
        };
    }
    StructureTag::General
}

fn ext_free(net: &FinancialNetwork) -> bool {
    net.bank_ids().all(|b| net.ext_liability(b).is_zero())
}

fn star_params(net: &FinancialNetwork) -> Option<(BankId, Amount, Amount)> {
    let n = net.bank_count();
    if n < 2 || !ext_free(net) || net.edge_count() != 2 * (n - 1) {
        return None;
    }
    // the star results presume no unilaterally solvent bank; with one the
    // instance is out of regime and falls to the exact solver
    if net.bank_ids().any(|b| net.portfolio(b).ratio() >= net.debt_liabilities(b).ratio()) {
        return None;
    }
    'center: for center in net.bank_ids() {
        let mut d_in: Option<Amount> = None;
        let mut d_out: Option<Amount> = None;
        for (debtor, creditor, amount) in net.edges() {
            let uniform = if creditor == center && debtor != center {
                &mut d_in
            } else if debtor == center && creditor != center {
                &mut d_out
            } else {
                continue 'center;
            };
            match uniform {
                Some(a) if a != amount => continue 'center,
                Some(_) => {}
                None => *uniform = Some(amount.clone()),
            }
        }
        // every peripheral must carry both legs
        let ok = net.bank_ids().filter(|&b| b != center).all(|b| {
            net.debt_between(b, center).is_some() && net.debt_between(center, b).is_some()
        });
        if ok {
            if let (Some(d_in), Some(d_out)) = (d_in, d_out) {
                return Some((center, d_in, d_out));
            }
        }
    }
    None
}

fn clique_params(net: &FinancialNetwork) -> Option<Amount> {
    let n = net.bank_count();
    if n < 2 || !ext_free(net) || net.edge_count() != n * (n - 1) {
        return None;
    }
    let mut d_core: Option<Amount> = None;
    for (_, _, amount) in net.edges() {
        match &d_core {
            Some(a) if a != amount => return None,
            Some(_) => {}
            None => d_core = Some(amount.clone()),
        }
    }
    d_core
}

struct CpView {
    cores: Vec<BankId>,
    periph_of: BTreeMap<BankId, Vec<BankId>>,
    d_core: Option<Amount>,
    d_in: Option<Amount>,
    d_out: Option<Amount>,
    n_periph: usize,
}

fn core_periphery_params(net: &FinancialNetwork) -> Option<CpView> {
    if !ext_free(net) {
        return None;
    }
    // a peripheral has exactly one obligation and one claim, both on the
    // same counterpart
    let mut peripheral_host: BTreeMap<BankId, BankId> = BTreeMap::new();
    let mut cores: Vec<BankId> = Vec::new();
    for bank in net.bank_ids() {
        let obligations = net.obligations_of(bank);
        let claims = net.claims_of(bank);
        if obligations.len() == 1 && claims.len() == 1 && obligations[0].0 == claims[0].0 {
            peripheral_host.insert(bank, obligations[0].0);
        } else {
            cores.push(bank);
        }
    }
    if cores.is_empty() {
        return None;
    }
    let core_set: BankSet = cores.iter().copied().collect();
    let mut periph_of: BTreeMap<BankId, Vec<BankId>> =
        cores.iter().map(|&c| (c, Vec::new())).collect();
    let mut d_in: Option<Amount> = None;
    let mut d_out: Option<Amount> = None;
    let mut p_periph: Option<Amount> = None;
    for (&q, &host) in &peripheral_host {
        if !core_set.contains(&host) {
            return None;
        }
        let into = net.debt_between(q, host).expect("peripheral obligation");
        let outof = net.debt_between(host, q)?;
        for (uniform, amount) in [(&mut d_in, into), (&mut d_out, outof)] {
            match uniform {
                Some(a) if &*a != amount => return None,
                Some(_) => {}
                None => *uniform = Some(amount.clone()),
            }
        }
        match &p_periph {
            Some(p) if p != net.portfolio(q) => return None,
            Some(_) => {}
            None => p_periph = Some(net.portfolio(q).clone()),
        }
        periph_of.get_mut(&host).expect("host is core").push(q);
    }
    // equal peripheral count per core bank
    let n_periph = periph_of.values().next().map_or(0, Vec::len);
    if periph_of.values().any(|v| v.len() != n_periph) {
        return None;
    }
    // the core is a symmetric uniform clique
    let mut d_core: Option<Amount> = None;
    for &a in &cores {
        for &b in &cores {
            if a == b {
                continue;
            }
            let amount = net.debt_between(a, b)?;
            match &d_core {
                Some(d) if d != amount => return None,
                Some(_) => {}
                None => d_core = Some(amount.clone()),
            }
        }
        // no edges beyond the clique and the own periphery
        let expected = cores.len() - 1 + periph_of[&a].len();
        if net.obligations_of(a).len() != expected || net.claims_of(a).len() != expected {
            return None;
        }
    }
    if cores.len() >= 2 && d_core.is_none() {
        return None;
    }
    if n_periph > 0 && (d_in.is_none() || d_out.is_none()) {
        return None;
    }
    Some(CpView { cores, periph_of, d_core, d_in, d_out, n_periph })
}

/// Optimal policy when no bank lies on more than one cycle: walk the cycles
/// in tier order, skip any cycle the running cascade already touches, and
/// on each remaining cycle bail out the bank closest to solvency.
pub fn disjoint_cycles_policy(net: &FinancialNetwork) -> Result<BailoutPolicy, StructureError> {
    let err = StructureError { needed: "disjoint-cycles" };
    let cycles =
        simple_cycles_capped(net, DEFAULT_CYCLE_CAP).map_err(|_| err.clone())?;
    if !cycles.multi_cycle_banks().is_empty() {
        return Err(err);
    }
    let tiers = cycle_tiers(net, &cycles).map_err(|_| err)?;
    let mut bailed = BankSet::new();
    let mut steps = Vec::new();
    for &k in &tiers.order {
        let closure = cascade_closure(net, &bailed).union;
        let cycle = cycles.cycle(k);
        if cycle.banks.iter().any(|b| closure.contains(b)) {
            continue; // the cascade has reached this cycle already
        }
        let (cost, bank) = cycle
            .banks
            .iter()
            .map(|&b| (shortfall_given(net, b, &closure), b))
            .min()
            .expect("cycle has banks");
        steps.push((bank, cost));
        bailed.insert(bank);
    }
    // off-regime leftovers (possible without weak balance): cheapest first
    loop {
        let closure = cascade_closure(net, &bailed).union;
        if closure.len() == net.bank_count() {
            break;
        }
        let (cost, bank) = net
            .bank_ids()
            .filter(|b| !closure.contains(b))
            .map(|b| (shortfall_given(net, b, &closure), b))
            .min()
            .expect("insolvent bank exists");
        steps.push((bank, cost));
        bailed.insert(bank);
    }
    Ok(BailoutPolicy::new(steps))
}

fn shortfall_given(net: &FinancialNetwork, bank: BankId, closure: &BankSet) -> Amount {
    let mut assets = net.portfolio(bank).ratio().clone();
    for (debtor, amount) in net.claims_of(bank) {
        if closure.contains(debtor) {
            assets += amount.ratio();
        }
    }
    Amount::pos_part(&(net.debt_liabilities(bank).ratio() - assets))
}

/// Optimal star policy: bail the floor(m*) highest-portfolio peripherals,
/// then finish on whichever is cheaper, one more peripheral or the center's
/// marginal shortfall, where m* = ((n-1)·d_out - p_center)/d_in.
pub fn star_policy(net: &FinancialNetwork) -> Result<BailoutPolicy, StructureError> {
    let (center, d_in, d_out) =
        star_params(net).ok_or(StructureError { needed: "star" })?;
    let n = net.bank_count();
    let mut peripherals: Vec<BankId> = net.bank_ids().filter(|&b| b != center).collect();
    // decreasing portfolio, ties by bank id
    peripherals.sort_by(|&a, &b| {
        net.portfolio(b).cmp(net.portfolio(a)).then(a.cmp(&b))
    });

    let center_shortfall =
        Rational::from_integer(((n - 1) as u64).into()) * d_out.ratio() - net.portfolio(center).ratio();
    if !center_shortfall.is_positive() {
        return Ok(BailoutPolicy::empty()); // the center clears by itself
    }
    let m_star = &center_shortfall / d_in.ratio();
    let floor = m_star
        .floor()
        .to_integer()
        .to_usize()
        .expect("small bailout count")
        .min(peripherals.len());

    let mut steps: Vec<(BankId, Amount)> = Vec::new();
    let peripheral_cost =
        |b: BankId| Amount::pos_part(&(d_in.ratio() - net.portfolio(b).ratio()));
    for &b in &peripherals[..floor] {
        steps.push((b, peripheral_cost(b)));
    }
    let marginal =
        &center_shortfall - Rational::from_integer((floor as u64).into()) * d_in.ratio();
    if marginal.is_positive() {
        if floor < peripherals.len() {
            let next = peripherals[floor];
            let next_cost = peripheral_cost(next);
            if &marginal > next_cost.ratio() {
                steps.push((next, next_cost));
            } else {
                steps.push((center, Amount::new(marginal).expect("positive marginal")));
            }
        } else {
            // the whole periphery cannot close the gap: top the center up
            steps.push((center, Amount::new(marginal).expect("positive marginal")));
        }
    }
    Ok(BailoutPolicy::new(steps.into_iter().filter(|(_, a)| !a.is_zero()).collect()))
}

/// Optimal core-periphery policy: restore insolvent core banks in
/// decreasing portfolio order, each through the star logic on its own
/// periphery with m*_i(x) = ((n_C-1-x)·d_core + n_P·d_out - p_i)/d_in,
/// letting cascades through the clique do the rest.
pub fn core_periphery_policy(net: &FinancialNetwork) -> Result<BailoutPolicy, StructureError> {
    let view = if let Some(cp) = core_periphery_params(net) {
        cp
    } else if let Some((center, d_in, d_out)) = star_params(net) {
        CpView {
            cores: vec![center],
            periph_of: [(center, net.bank_ids().filter(|&b| b != center).collect())]
                .into_iter()
                .collect(),
            d_core: None,
            d_in: Some(d_in),
            d_out: Some(d_out),
            n_periph: net.bank_count() - 1,
        }
    } else {
        return Err(StructureError { needed: "core-periphery" });
    };

    let mut bailed = BankSet::new();
    let mut steps: Vec<(BankId, Amount)> = Vec::new();
    loop {
        let closure = cascade_closure(net, &bailed).union;
        if closure.len() == net.bank_count() {
            break;
        }
        // the insolvent core bank with the highest portfolio, ties by id
        let Some(core) = view
            .cores
            .iter()
            .copied()
            .filter(|c| !closure.contains(c))
            .max_by(|&a, &b| {
                net.portfolio(a).cmp(net.portfolio(b)).then(b.cmp(&a))
            })
        else {
            // cores are done; any stragglers are off-regime
            let (cost, bank) = net
                .bank_ids()
                .filter(|b| !closure.contains(b))
                .map(|b| (shortfall_given(net, b, &closure), b))
                .min()
                .expect("insolvent bank exists");
            steps.push((bank, cost));
            bailed.insert(bank);
            continue;
        };
        let shortfall = shortfall_given(net, core, &closure).into_ratio();
        let mut remaining = shortfall;
        let unbailed_periphery: Vec<BankId> = view.periph_of[&core]
            .iter()
            .copied()
            .filter(|q| !closure.contains(q))
            .collect();
        if let (Some(d_in), false) = (&view.d_in, unbailed_periphery.is_empty()) {
            let m = &remaining / d_in.ratio();
            let mut take = m.floor().to_integer().to_usize().expect("small bailout count");
            if take >= unbailed_periphery.len() {
                take = unbailed_periphery.len(); // bail them all, then top up
            } else {
                let marginal = &remaining
                    - Rational::from_integer((take as u64).into()) * d_in.ratio();
                let next = unbailed_periphery[take];
                let next_cost = Amount::pos_part(&(d_in.ratio() - net.portfolio(next).ratio()));
                if marginal.is_positive() && marginal > *next_cost.ratio() {
                    take += 1; // one more peripheral beats topping up the core
                }
            }
            for &q in &unbailed_periphery[..take] {
                let cost = Amount::pos_part(&(d_in.ratio() - net.portfolio(q).ratio()));
                if !cost.is_zero() {
                    steps.push((q, cost));
                }
                bailed.insert(q);
                remaining -= d_in.ratio();
            }
        }
        if remaining.is_positive() {
            steps.push((core, Amount::new(remaining).expect("positive remainder")));
        }
        bailed.insert(core);
    }
    Ok(BailoutPolicy::new(steps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bailout::{policy_cost, solve_exact, SolverParams};
    use crate::generate::{generate, GeneratorSpec};
    use crate::network::NetworkBuilder;
    use crate::rational::parse_amount;
    use crate::testnets;

    fn amt(s: &str) -> Amount {
        parse_amount(s).unwrap()
    }

    fn star4() -> FinancialNetwork {
        generate(&GeneratorSpec::Star {
            banks: 4,
            d_in: amt("2"),
            d_out: amt("1"),
            portfolios: vec![amt("1/2"), amt("1/2"), amt("1/2"), amt("0")],
        })
        .unwrap()
    }

    #[test]
    fn detector_examples() {
        assert_eq!(
            detect_structure(&star4()),
            StructureTag::Star { center: BankId(4), d_in: amt("2"), d_out: amt("1") }
        );
        let pairs = NetworkBuilder::new(4)
            .debt(1, 2, amt("1"))
            .debt(2, 1, amt("1"))
            .debt(3, 4, amt("1"))
            .debt(4, 3, amt("1"))
            .build()
            .unwrap();
        assert_eq!(detect_structure(&pairs), StructureTag::DisjointCycles);
        assert_eq!(detect_structure(&testnets::figure1()), StructureTag::General);
        let clique = generate(&GeneratorSpec::CorePeriphery {
            n_core: 3,
            n_periph: 0,
            d_core: amt("1"),
            d_in: amt("1"),
            d_out: amt("1"),
            p_core: vec![amt("3/2"), amt("1"), amt("0")],
            p_periph: amt("0"),
        })
        .unwrap();
        assert_eq!(detect_structure(&clique), StructureTag::Clique { d_core: amt("1") });
        let cp = generate(&GeneratorSpec::CorePeriphery {
            n_core: 2,
            n_periph: 2,
            d_core: amt("1"),
            d_in: amt("2"),
            d_out: amt("1"),
            p_core: vec![amt("1"), amt("1")],
            p_periph: amt("3/2"),
        })
        .unwrap();
        assert!(matches!(detect_structure(&cp), StructureTag::CorePeriphery { n_periph: 2, .. }));
    }

    #[test]
    fn asymmetric_star_falls_to_general() {
        let lopsided = NetworkBuilder::new(3)
            .debt(1, 3, amt("2"))
            .debt(3, 1, amt("1"))
            .debt(2, 3, amt("2"))
            .debt(3, 2, amt("1/2")) // unequal out-leg
            .build()
            .unwrap();
        assert_eq!(detect_structure(&lopsided), StructureTag::General);
    }

    #[test]
    fn disjoint_cycles_bail_the_cheapest_bank_per_cycle() {
        let net = NetworkBuilder::new(4)
            .debt(1, 2, amt("1"))
            .debt(2, 1, amt("1"))
            .debt(3, 4, amt("3"))
            .debt(4, 3, amt("3"))
            .portfolio(3, amt("1"))
            .build()
            .unwrap();
        let policy = disjoint_cycles_policy(&net).unwrap();
        assert_eq!(policy.steps, vec![(BankId(1), amt("1")), (BankId(3), amt("2"))]);
        let exact = solve_exact(&net, &SolverParams::default()).unwrap();
        assert_eq!(exact.policy.total, policy.total);
    }

    #[test]
    fn single_cycle_policy_is_min_shortfall() {
        let net = testnets::wheel(3, amt("2"), amt("1"));
        let policy = disjoint_cycles_policy(&net).unwrap();
        assert_eq!(policy.steps, vec![(BankId(1), amt("1"))]);
    }

    #[test]
    fn tiered_cascade_reduces_downstream_costs() {
        // cycle {1,2} feeds cycle {3,4} via a bridge debt 2 -> 3; clearing
        // the first tier shaves one unit off the second
        let net = NetworkBuilder::new(5)
            .debt(1, 2, amt("2"))
            .debt(2, 1, amt("2"))
            .debt(2, 3, amt("1"))
            .debt(3, 4, amt("2"))
            .debt(4, 3, amt("2"))
            .debt(4, 5, amt("1"))
            .portfolio(2, amt("1"))
            .portfolio(4, amt("1"))
            .build()
            .unwrap();
        let policy = disjoint_cycles_policy(&net).unwrap();
        assert_eq!(policy.steps, vec![(BankId(1), amt("2")), (BankId(3), amt("1"))]);
        let exact = solve_exact(&net, &SolverParams::default()).unwrap();
        assert_eq!(exact.policy.total, policy.total);
        assert!(policy_cost(&net, &policy).1);
    }

    #[test]
    fn star_golden_instance() {
        let policy = star_policy(&star4()).unwrap();
        assert_eq!(policy.steps, vec![(BankId(1), amt("3/2")), (BankId(4), amt("1"))]);
        assert_eq!(policy.total, amt("5/2"));
    }

    #[test]
    fn star_integer_m_needs_no_center_step() {
        let net = generate(&GeneratorSpec::Star {
            banks: 4,
            d_in: amt("2"),
            d_out: amt("1"),
            portfolios: vec![amt("1"), amt("1"), amt("1"), amt("1")],
        })
        .unwrap();
        // m* = (3 - 1)/2 = 1 exactly
        let policy = star_policy(&net).unwrap();
        assert_eq!(policy.steps, vec![(BankId(1), amt("1"))]);
        let exact = solve_exact(&net, &SolverParams::default()).unwrap();
        assert_eq!(exact.policy.total, policy.total);
    }

    #[test]
    fn star_with_broke_periphery_costs_the_center_shortfall() {
        let net = generate(&GeneratorSpec::Star {
            banks: 3,
            d_in: amt("1"),
            d_out: amt("1"),
            portfolios: vec![amt("0"), amt("0"), amt("0")],
        })
        .unwrap();
        let policy = star_policy(&net).unwrap();
        // either branch costs the full center shortfall of 2; the policy
        // still starts with peripherals
        assert_eq!(policy.total, amt("2"));
        assert_eq!(policy.banks(), vec![BankId(1), BankId(2)]);
        let exact = solve_exact(&net, &SolverParams::default()).unwrap();
        assert_eq!(exact.policy.total, amt("2"));
    }

    #[test]
    fn star_never_bails_center_first() {
        let policy = star_policy(&star4()).unwrap();
        let center_pos = policy.banks().iter().position(|&b| b == BankId(4));
        if let Some(k) = center_pos {
            assert_eq!(k, policy.steps.len() - 1);
        }
    }

    #[test]
    fn clique_policy_leverages_the_cascade() {
        let clique = generate(&GeneratorSpec::CorePeriphery {
            n_core: 3,
            n_periph: 0,
            d_core: amt("1"),
            d_in: amt("1"),
            d_out: amt("1"),
            p_core: vec![amt("3/2"), amt("1"), amt("0")],
            p_periph: amt("0"),
        })
        .unwrap();
        let policy = core_periphery_policy(&clique).unwrap();
        assert_eq!(policy.steps, vec![(BankId(1), amt("1/2"))]);
        let exact = solve_exact(&clique, &SolverParams::default()).unwrap();
        assert_eq!(exact.policy.total, amt("1/2"));
    }

    #[test]
    fn single_core_degenerates_to_the_star_policy() {
        // weakly balanced star: p_P >= d_in - d_out for every peripheral
        let star = generate(&GeneratorSpec::Star {
            banks: 4,
            d_in: amt("2"),
            d_out: amt("1"),
            portfolios: vec![amt("3/2"), amt("5/4"), amt("1"), amt("0")],
        })
        .unwrap();
        let a = star_policy(&star).unwrap();
        let b = core_periphery_policy(&star).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.steps, vec![(BankId(1), amt("1/2")), (BankId(2), amt("3/4"))]);
        let exact = solve_exact(&star, &SolverParams::default()).unwrap();
        assert_eq!(exact.policy.total, a.total);
    }

    #[test]
    fn core_periphery_all_peripherals_branch() {
        // each core's shortfall of 2 exceeds what its single peripheral can
        // deliver: bail the whole periphery, then top up the core
        let net = generate(&GeneratorSpec::CorePeriphery {
            n_core: 2,
            n_periph: 1,
            d_core: amt("1"),
            d_in: amt("1"),
            d_out: amt("2"),
            p_core: vec![amt("1"), amt("1")],
            p_periph: amt("1/2"),
        })
        .unwrap();
        let policy = core_periphery_policy(&net).unwrap();
        assert_eq!(
            policy.steps,
            vec![(BankId(3), amt("1/2")), (BankId(1), amt("1")), (BankId(4), amt("1/2"))]
        );
        let exact = solve_exact(&net, &SolverParams::default()).unwrap();
        assert_eq!(exact.policy.total, policy.total);
    }

    #[test]
    fn core_banks_restored_in_decreasing_portfolio_order() {
        let net = generate(&GeneratorSpec::CorePeriphery {
            n_core: 3,
            n_periph: 1,
            d_core: amt("2"),
            d_in: amt("2"),
            d_out: amt("1"),
            p_core: vec![amt("1/4"), amt("3"), amt("2")],
            p_periph: amt("3/2"),
        })
        .unwrap();
        let policy = core_periphery_policy(&net).unwrap();
        let cores: Vec<BankId> = policy
            .banks()
            .into_iter()
            .filter(|b| b.0 <= 3)
            .collect();
        let mut sorted = cores.clone();
        sorted.sort_by(|&a, &b| net.portfolio(b).cmp(net.portfolio(a)).then(a.cmp(&b)));
        assert_eq!(cores, sorted);
        assert!(policy_cost(&net, &policy).1);
    }

    #[test]
    fn policies_reject_the_wrong_shape() {
        let fig1 = testnets::figure1();
        assert!(star_policy(&fig1).is_err());
        assert!(core_periphery_policy(&fig1).is_err());
        assert!(disjoint_cycles_policy(&fig1).is_err());
    }
}
