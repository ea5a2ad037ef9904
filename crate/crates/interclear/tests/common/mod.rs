//! Shared harness for the integration suites: seeded instance generators
//! and the independent brute-force bailout oracle.

#![allow(dead_code)]

use interclear::generate::{generate, GeneratorSpec, RatRange, SplitMix64};
use interclear::network::{BankruptcyCosts, FinancialNetwork, RawNetwork};
use interclear::rational::{Amount, Rational};
use num_traits::Zero;

pub fn rng(seed: u64) -> SplitMix64 {
    SplitMix64::new(seed)
}

/// Seed-deterministic random network under full bankruptcy costs.
pub fn random_network(banks: usize, edge_percent: u32, seed: u64) -> FinancialNetwork {
    generate(&GeneratorSpec::Random {
        banks,
        edge_percent,
        amount: RatRange::new(1, 16, 4),
        portfolio: RatRange::new(0, 10, 4),
        seed,
    })
    .unwrap()
    .with_costs(BankruptcyCosts::Full)
}

/// Random network forced into weak balance by injecting its imbalance.
pub fn weakly_balanced_random(banks: usize, edge_percent: u32, seed: u64) -> FinancialNetwork {
    let net = random_network(banks, edge_percent, seed);
    net.with_injections(&net.imbalance_injections())
}

/// Same topology, portfolios and external liabilities adjusted so that
/// every bank is exactly balanced.
pub fn exactly_balanced_variant(net: &FinancialNetwork) -> FinancialNetwork {
    let mut portfolios = Vec::new();
    let mut ext = Vec::new();
    for bank in net.bank_ids() {
        let assets = net.debt_assets(bank).ratio();
        let liab = net.debt_liabilities(bank).ratio();
        let extra = Amount::pos_part(&(assets - liab));
        let new_liab = liab + extra.ratio();
        portfolios.push(Amount::new(new_liab - assets).expect("topped-up liability"));
        ext.push(net.ext_liability(bank).clone() + extra);
    }
    FinancialNetwork::validate(RawNetwork {
        bank_count: net.bank_count(),
        portfolios,
        ext_liabilities: ext,
        debts: net.edges().map(|(d, c, a)| (d, c, a.clone())).collect(),
        costs: net.costs().clone(),
    })
    .expect("rebalanced network is valid")
}

/// Exhaustive minimum bailout cost over every subset of banks in every
/// order, computed as a dynamic program over bailed sets (the cost of a
/// step depends only on the set bailed before it). Independent of the
/// production solver's cycle-restricted search.
pub fn oracle_min_bailout(net: &FinancialNetwork) -> Rational {
    let n = net.bank_count();
    assert!(n <= 16, "oracle is exponential");
    let p: Vec<Rational> = net.bank_ids().map(|b| net.portfolio(b).ratio().clone()).collect();
    let liab: Vec<Rational> =
        net.bank_ids().map(|b| net.debt_liabilities(b).ratio().clone()).collect();
    let claims: Vec<Vec<(usize, Rational)>> = net
        .bank_ids()
        .map(|b| {
            net.claims_of(b)
                .iter()
                .map(|(d, a)| ((d.0 - 1) as usize, a.ratio().clone()))
                .collect()
        })
        .collect();
    let closure = |bailed: u32| -> u32 {
        let mut s = bailed;
        loop {
            let mut grew = false;
            for i in 0..n {
                if s >> i & 1 == 1 {
                    continue;
                }
                let mut assets = p[i].clone();
                for (d, a) in &claims[i] {
                    if s >> d & 1 == 1 {
                        assets += a;
                    }
                }
                if assets >= liab[i] {
                    s |= 1 << i;
                    grew = true;
                }
            }
            if !grew {
                return s;
            }
        }
    };
    let full = (1u32 << n) - 1;
    let size = 1usize << n;
    let closures: Vec<u32> = (0..size).map(|m| closure(m as u32)).collect();
    let mut dp: Vec<Option<Rational>> = vec![None; size];
    dp[0] = Some(Rational::zero());
    let mut best: Option<Rational> = None;
    for mask in 0..size {
        let Some(cost) = dp[mask].clone() else { continue };
        if closures[mask] == full {
            if best.as_ref().map_or(true, |b| &cost < b) {
                best = Some(cost.clone());
            }
            continue; // extending a covering set never helps
        }
        for i in 0..n {
            if mask >> i & 1 == 1 {
                continue;
            }
            let mut step = Rational::zero();
            if closures[mask] >> i & 1 == 0 {
                let mut assets = p[i].clone();
                for (d, a) in &claims[i] {
                    if closures[mask] >> d & 1 == 1 {
                        assets += a;
                    }
                }
                let gap = &liab[i] - assets;
                if gap > Rational::zero() {
                    step = gap;
                }
            }
            let next = mask | 1 << i;
            let total = &cost + step;
            if dp[next].as_ref().map_or(true, |c| &total < c) {
                dp[next] = Some(total);
            }
        }
    }
    best.expect("bailing out everybody always works")
}

/// Literal all-subsets-all-orders enumeration, for cross-checking the
/// dynamic-program oracle on tiny instances.
pub fn oracle_min_bailout_permutations(net: &FinancialNetwork) -> Rational {
    let n = net.bank_count();
    assert!(n <= 6, "factorial oracle");
    let banks: Vec<u32> = (1..=n as u32).collect();
    let mut best: Option<Rational> = None;
    let mut order: Vec<u32> = Vec::new();
    let mut used = vec![false; n];
    fn walk(
        net: &FinancialNetwork,
        banks: &[u32],
        used: &mut [bool],
        order: &mut Vec<u32>,
        best: &mut Option<Rational>,
    ) {
        // evaluate the current prefix as a complete policy
        let mut bailed = interclear::network::BankSet::new();
        let mut total = Rational::zero();
        for &b in order.iter() {
            let cost = interclear::bailout::bailout_cost(
                net,
                interclear::network::BankId(b),
                &bailed,
            );
            total += cost.ratio();
            bailed.insert(interclear::network::BankId(b));
        }
        if interclear::solvency::cascade_closure(net, &bailed).covers_all(net)
            && best.as_ref().map_or(true, |c| &total < c)
        {
            *best = Some(total);
        }
        for k in 0..banks.len() {
            if !used[k] {
                used[k] = true;
                order.push(banks[k]);
                walk(net, banks, used, order, best);
                order.pop();
                used[k] = false;
            }
        }
    }
    walk(net, &banks, &mut used, &mut order, &mut best);
    best.expect("bailing out everybody always works")
}

/// Amount in quarters within [lo, hi] (numerators inclusive).
pub fn quarters(rng: &mut SplitMix64, lo: u64, hi: u64) -> Amount {
    Amount::from_ratio(rng.range(lo, hi) as i64, 4)
}

pub fn is_zero(a: &Amount) -> bool {
    a.ratio().is_zero()
}
