//! Clearing equilibria: mutually consistent bank values, payments, and
//! bankruptcy costs.
//!
//! A value vector is an equilibrium when every solvent bank pays its debts
//! in full, every insolvent bank pays the rationed residual of its assets
//! net of bankruptcy costs, and the resulting incomes reproduce exactly the
//! assumed solvency pattern. The set of equilibria is a finite lattice; the
//! best and worst members are found by monotone iteration on the default
//! set, and at desk scale the whole lattice can be enumerated.
//!
//! Boundary convention: a bank with assets exactly equal to liabilities is
//! solvent (costs are incurred only on a strict shortfall).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::network::{BankId, BankSet, BankruptcyCosts, FinancialNetwork};
use crate::rational::{Amount, Rational, Value};

pub const DEFAULT_ENUMERATION_CAP: usize = 20;

/// A clearing equilibrium: values, default set, realized payments, and the
/// bankruptcy costs actually incurred.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equilibrium {
    pub values: Vec<Value>,
    pub defaults: BankSet,
    /// Realized payment on every debt edge, keyed (debtor, creditor).
    pub payments: BTreeMap<(BankId, BankId), Amount>,
    pub costs: Vec<Amount>,
}

impl Equilibrium {
    pub fn value(&self, bank: BankId) -> &Value {
        &self.values[(bank.0 - 1) as usize]
    }

    pub fn cost(&self, bank: BankId) -> &Amount {
        &self.costs[(bank.0 - 1) as usize]
    }

    pub fn is_solvent(&self, bank: BankId) -> bool {
        !self.defaults.contains(&bank)
    }

    pub fn all_solvent(&self) -> bool {
        self.defaults.is_empty()
    }

    /// Payment flowing debtor -> creditor (zero if there is no such debt).
    pub fn payment(&self, debtor: BankId, creditor: BankId) -> Amount {
        self.payments.get(&(debtor, creditor)).cloned().unwrap_or_else(Amount::zero)
    }

    /// Total debt income `d_i^A` of a bank.
    pub fn received(&self, bank: BankId) -> Amount {
        self.payments
            .iter()
            .filter(|((_, c), _)| *c == bank)
            .map(|(_, a)| a.clone())
            .sum()
    }
}

/// Payments solved under a hypothesized default set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefaultRegime {
    pub payments: BTreeMap<(BankId, BankId), Amount>,
    /// Debt income per bank under these payments.
    pub received: Vec<Amount>,
    /// True iff the incomes reproduce the hypothesized default set exactly.
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveError {
    /// The restricted payment system has no finite solution. Cannot occur
    /// when every defaulter leaks value to node 0 or to a full payer.
    SingularPayments { involved: Vec<BankId> },
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::SingularPayments { involved } => {
                let ids: Vec<String> = involved.iter().map(|b| b.to_string()).collect();
                write!(f, "singular payment system among banks {{{}}}", ids.join(", "))
            }
        }
    }
}

impl std::error::Error for SolveError {}

/// Solves the rationed-payment fixed point for the banks in `defaults`,
/// with every other bank paying in full.
pub fn payments_for_defaults(
    net: &FinancialNetwork,
    defaults: &BankSet,
) -> Result<DefaultRegime, SolveError> {
    let n = net.bank_count();
    let in_f = |b: BankId| defaults.contains(&b);

    // Total payout of each defaulter.
    let mut payout: BTreeMap<BankId, Rational> = BTreeMap::new();
    match net.costs() {
        BankruptcyCosts::Full => {
            for &bank in defaults {
                payout.insert(bank, Rational::zero());
            }
        }
        BankruptcyCosts::Canonical { share, fixed } => {
            solve_canonical_payouts(net, defaults, share, fixed, &mut payout)?;
        }
    }

    let mut payments = BTreeMap::new();
    let mut received = vec![Amount::zero(); n];
    for (debtor, creditor, face) in net.edges() {
        let paid = if in_f(debtor) {
            let liab = net.debt_liabilities(debtor).ratio();
            let raw = face.ratio() * &payout[&debtor] / liab;
            // clip at the face value; exceeding it only happens when the
            // hypothesized default set is inconsistent anyway
            if &raw > face.ratio() {
                face.clone()
            } else {
                Amount::new(raw).expect("payout is nonnegative")
            }
        } else {
            face.clone()
        };
        received[(creditor.0 - 1) as usize] += &paid;
        payments.insert((debtor, creditor), paid);
    }

    let consistent = net.bank_ids().all(|bank| {
        let assets = net.portfolio(bank).ratio() + received[(bank.0 - 1) as usize].ratio();
        let broke = &assets < net.debt_liabilities(bank).ratio();
        broke == in_f(bank)
    });

    Ok(DefaultRegime { payments, received, consistent })
}

/// Least fixed point of `y = max((1-a)(p + income) - b, 0)` over the
/// defaulters, by support iteration: solve the linear system on the current
/// positive support, admit any bank whose affine value turns positive, and
/// repeat. Supports only grow, so at most |F| rounds.
fn solve_canonical_payouts(
    net: &FinancialNetwork,
    defaults: &BankSet,
    share: &Rational,
    fixed: &Amount,
    payout: &mut BTreeMap<BankId, Rational>,
) -> Result<(), SolveError> {
    let keep = Rational::one() - share; // (1 - a)
    let unknowns: Vec<BankId> = defaults
        .iter()
        .copied()
        .filter(|&b| !net.debt_liabilities(b).is_zero())
        .collect();
    for &bank in defaults {
        payout.insert(bank, Rational::zero());
    }
    if unknowns.is_empty() {
        return Ok(());
    }
    let pos = |b: BankId| unknowns.binary_search(&b).expect("unknown bank");

    // affine constant: (1-a)(p + full income from non-defaulters) - b
    let consts: Vec<Rational> = unknowns
        .iter()
        .map(|&bank| {
            let mut income = net.portfolio(bank).ratio().clone();
            for (debtor, amount) in net.claims_of(bank) {
                if !defaults.contains(debtor) {
                    income += amount.ratio();
                }
            }
            &keep * income - fixed.ratio()
        })
        .collect();
    // coefficient on y_l in the equation of k: (1-a) * D_{kl} / D_l^L
    let coeff: Vec<Vec<(usize, Rational)>> = unknowns
        .iter()
        .map(|&bank| {
            net.claims_of(bank)
                .iter()
                .filter(|(debtor, _)| defaults.contains(debtor) && !net.debt_liabilities(*debtor).is_zero())
                .map(|(debtor, amount)| {
                    let c = &keep * amount.ratio() / net.debt_liabilities(*debtor).ratio();
                    (pos(*debtor), c)
                })
                .collect()
        })
        .collect();

    let m = unknowns.len();
    let mut support: Vec<usize> = (0..m).filter(|&k| consts[k] > Rational::zero()).collect();
    let mut solution = vec![Rational::zero(); m];
    loop {
        if !support.is_empty() {
            let s = support.len();
            let col_of: BTreeMap<usize, usize> =
                support.iter().enumerate().map(|(col, &k)| (k, col)).collect();
            let mut matrix = vec![vec![Rational::zero(); s]; s];
            let mut rhs = Vec::with_capacity(s);
            for (row, &k) in support.iter().enumerate() {
                matrix[row][row] = Rational::one();
                for (l, c) in &coeff[k] {
                    if let Some(&col) = col_of.get(l) {
                        matrix[row][col] -= c;
                    }
                }
                rhs.push(consts[k].clone());
            }
            let solved = solve_linear(matrix, rhs).ok_or_else(|| SolveError::SingularPayments {
                involved: support.iter().map(|&k| unknowns[k]).collect(),
            })?;
            for v in solution.iter_mut() {
                v.set_zero();
            }
            for (col, &k) in support.iter().enumerate() {
                solution[k] = solved[col].clone();
            }
        }
        let mut grew = false;
        for k in 0..m {
            if support.contains(&k) {
                continue;
            }
            let mut affine = consts[k].clone();
            for (l, c) in &coeff[k] {
                affine += c * &solution[*l];
            }
            if affine > Rational::zero() {
                support.push(k);
                grew = true;
            }
        }
        if !grew {
            break;
        }
        support.sort_unstable();
    }
    debug_assert!(solution.iter().all(|y| y >= &Rational::zero()));
    for (k, &bank) in unknowns.iter().enumerate() {
        payout.insert(bank, solution[k].clone());
    }
    Ok(())
}

/// Exact Gaussian elimination; None when singular.
fn solve_linear(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].clone();
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &inv;
            for c in col..n {
                let sub = &factor * &a[col][c];
                a[r][c] -= sub;
            }
            let sub = &factor * &b[col];
            b[r] -= sub;
        }
    }
    Some((0..n).map(|r| &b[r] / &a[r][r]).collect())
}

fn build_equilibrium(
    net: &FinancialNetwork,
    defaults: BankSet,
    regime: DefaultRegime,
) -> Equilibrium {
    let n = net.bank_count();
    let mut values = Vec::with_capacity(n);
    let mut costs = Vec::with_capacity(n);
    for bank in net.bank_ids() {
        let recv = regime.received[(bank.0 - 1) as usize].ratio();
        let p = net.portfolio(bank).ratio();
        let liab = net.debt_liabilities(bank).ratio();
        if !defaults.contains(&bank) {
            values.push(Value::new(p + recv - liab));
            costs.push(Amount::zero());
        } else {
            match net.costs() {
                BankruptcyCosts::Full => {
                    // the freeze consumes incoming payments; own portfolio
                    // stays on the books
                    values.push(Value::new(p - liab));
                    costs.push(Amount::new(recv.clone()).expect("income is nonnegative"));
                }
                BankruptcyCosts::Canonical { share, fixed } => {
                    let beta = fixed.ratio() + share * (p + recv);
                    values.push(Value::new(p + recv - liab - &beta));
                    costs.push(Amount::new(beta).expect("admissible costs are nonnegative"));
                }
            }
        }
    }
    Equilibrium { values, defaults, payments: regime.payments, costs }
}

fn induced_defaults(net: &FinancialNetwork, regime: &DefaultRegime) -> BankSet {
    net.bank_ids()
        .filter(|&bank| {
            let assets = net.portfolio(bank).ratio() + regime.received[(bank.0 - 1) as usize].ratio();
            &assets < net.debt_liabilities(bank).ratio()
        })
        .collect()
}

/// Greatest equilibrium: start from full payments and let defaults
/// accumulate until the default set reproduces itself. The set grows
/// monotonically, so this ends within n rounds.
pub fn best_equilibrium(net: &FinancialNetwork) -> Result<Equilibrium, SolveError> {
    let mut defaults = BankSet::new();
    loop {
        let regime = payments_for_defaults(net, &defaults)?;
        let next = induced_defaults(net, &regime);
        if next == defaults {
            return Ok(build_equilibrium(net, defaults, regime));
        }
        debug_assert!(next.is_superset(&defaults), "best iteration must grow");
        defaults = next;
    }
}

/// Least equilibrium: start from everybody defaulting and promote banks
/// that are solvent even then; the default set shrinks monotonically.
pub fn worst_equilibrium(net: &FinancialNetwork) -> Result<Equilibrium, SolveError> {
    let mut defaults: BankSet = net
        .bank_ids()
        .filter(|&b| !net.debt_liabilities(b).is_zero())
        .collect();
    loop {
        let regime = payments_for_defaults(net, &defaults)?;
        let next = induced_defaults(net, &regime);
        if next == defaults {
            return Ok(build_equilibrium(net, defaults, regime));
        }
        debug_assert!(next.is_subset(&defaults), "worst iteration must shrink");
        defaults = next;
    }
}

/// True iff `values` (with its induced defaults, payments, and costs)
/// satisfies every equilibrium condition exactly.
pub fn verify_values(net: &FinancialNetwork, values: &[Value]) -> bool {
    if values.len() != net.bank_count() {
        return false;
    }
    let defaults: BankSet = net
        .bank_ids()
        .filter(|b| values[(b.0 - 1) as usize].is_negative())
        .collect();
    let Ok(regime) = payments_for_defaults(net, &defaults) else { return false };
    if !regime.consistent {
        return false;
    }
    let eq = build_equilibrium(net, defaults, regime);
    eq.values == values
}

/// One application of the book-value map: payments read off the given
/// values, then values recomputed. Equilibria are exactly its fixed points,
/// and it is monotone in the value order.
pub fn value_update_step(net: &FinancialNetwork, values: &[Value]) -> Vec<Value> {
    assert_eq!(values.len(), net.bank_count());
    let payout_of = |bank: BankId| -> Rational {
        let v = values[(bank.0 - 1) as usize].ratio();
        let liab = net.debt_liabilities(bank).ratio();
        match net.costs() {
            BankruptcyCosts::Full => {
                if v >= &Rational::zero() {
                    liab.clone()
                } else {
                    Rational::zero()
                }
            }
            BankruptcyCosts::Canonical { .. } => {
                let raw = v + liab;
                if raw <= Rational::zero() {
                    Rational::zero()
                } else if &raw >= liab {
                    liab.clone()
                } else {
                    raw
                }
            }
        }
    };
    let mut received = vec![Rational::zero(); net.bank_count()];
    for (debtor, creditor, face) in net.edges() {
        let liab = net.debt_liabilities(debtor).ratio();
        received[(creditor.0 - 1) as usize] += face.ratio() * payout_of(debtor) / liab;
    }
    net.bank_ids()
        .map(|bank| {
            let p = net.portfolio(bank).ratio();
            let liab = net.debt_liabilities(bank).ratio();
            let recv = &received[(bank.0 - 1) as usize];
            let assets = p + recv;
            if &assets >= liab {
                return Value::new(assets - liab);
            }
            match net.costs() {
                BankruptcyCosts::Full => Value::new(p - liab),
                BankruptcyCosts::Canonical { share, fixed } => {
                    let beta = fixed.ratio() + share * &assets;
                    Value::new(assets - liab - beta)
                }
            }
        })
        .collect()
}

/// The whole lattice, best first, worst last.
#[derive(Debug, Clone)]
pub struct EquilibriumSet {
    pub equilibria: Vec<Equilibrium>,
    pub best: usize,
    pub worst: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EnumerateError {
    CapExceeded { cap: usize, banks: usize },
    Solve(SolveError),
}

impl fmt::Display for EnumerateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnumerateError::CapExceeded { cap, banks } => {
                write!(f, "enumeration cap {cap} exceeded ({banks} banks)")
            }
            EnumerateError::Solve(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for EnumerateError {}

impl From<SolveError> for EnumerateError {
    fn from(e: SolveError) -> Self {
        EnumerateError::Solve(e)
    }
}

/// Enumerates every equilibrium by checking each candidate default set
/// sandwiched between the best and the worst one.
pub fn enumerate_equilibria(net: &FinancialNetwork) -> Result<EquilibriumSet, EnumerateError> {
    enumerate_equilibria_with(net, DEFAULT_ENUMERATION_CAP, 1)
}

pub fn enumerate_equilibria_with(
    net: &FinancialNetwork,
    cap: usize,
    threads: usize,
) -> Result<EquilibriumSet, EnumerateError> {
    if net.bank_count() > cap {
        return Err(EnumerateError::CapExceeded { cap, banks: net.bank_count() });
    }
    let best = best_equilibrium(net)?;
    let worst = worst_equilibrium(net)?;
    let free: Vec<BankId> =
        worst.defaults.difference(&best.defaults).copied().collect();

    let candidates: Vec<BankSet> = (0u64..(1u64 << free.len()))
        .map(|mask| {
            let mut f = best.defaults.clone();
            for (k, &bank) in free.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    f.insert(bank);
                }
            }
            f
        })
        .collect();

    let evaluate = |f: &BankSet| -> Result<Option<Equilibrium>, SolveError> {
        let regime = payments_for_defaults(net, f)?;
        if regime.consistent {
            Ok(Some(build_equilibrium(net, f.clone(), regime)))
        } else {
            Ok(None)
        }
    };

    let mut found: Vec<Equilibrium> = Vec::new();
    if threads <= 1 || candidates.len() < 2 {
        for f in &candidates {
            if let Some(eq) = evaluate(f)? {
                found.push(eq);
            }
        }
    } else {
        // evaluate candidate chunks concurrently; results are merged in
        // candidate order so the outcome is identical at any thread count
        let workers = threads.min(candidates.len());
        let chunk = candidates.len().div_ceil(workers);
        let eval_ref = &evaluate;
        let results = std::thread::scope(|scope| {
            let handles: Vec<_> = candidates
                .chunks(chunk)
                .map(|part| scope.spawn(move || part.iter().map(eval_ref).collect::<Vec<_>>()))
                .collect();
            handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect::<Vec<_>>()
        });
        for r in results {
            if let Some(eq) = r? {
                found.push(eq);
            }
        }
    }

    // deterministic order: fewer defaults first, then by default set; merge
    // identical value vectors keeping the smaller default set (the
    // non-default labeling of boundary banks is canonical)
    found.sort_by(|x, y| {
        x.defaults
            .len()
            .cmp(&y.defaults.len())
            .then_with(|| x.defaults.cmp(&y.defaults))
    });
    let mut merged: Vec<Equilibrium> = Vec::new();
    for eq in found {
        if !merged.iter().any(|m| m.values == eq.values) {
            merged.push(eq);
        }
    }

    let best_index = merged
        .iter()
        .position(|e| e.defaults == best.defaults)
        .expect("best equilibrium is in the lattice");
    let worst_index = merged
        .iter()
        .position(|e| e.defaults == worst.defaults)
        .expect("worst equilibrium is in the lattice");
    Ok(EquilibriumSet { equilibria: merged, best: best_index, worst: worst_index })
}
