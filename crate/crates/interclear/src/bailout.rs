//! Minimum-cost bailout policies and guaranteed-payment sets.
//!
//! A bailout policy is an ordered sequence of capital injections. The cost
//! of bailing out a bank depends on who is already solvent — payments from
//! the cascade closure of earlier bailouts shrink later shortfalls — so the
//! order matters and the minimization is combinatorial (it embeds the
//! partition problem). The exact solver is a branch-and-bound over
//! (cycle order, bank per cycle) policies with incumbent and lower-bound
//! pruning; greedy baselines, the half-shortfall bound, and the minimum
//! payment cover give cheap upper bounds and are interesting policies in
//! their own right. Everything here assumes full bankruptcy costs: a bank
//! either pays in full or not at all.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::cycles::{simple_cycles_capped, CycleError, CycleSet, DEFAULT_CYCLE_CAP};
use crate::network::{BankId, BankSet, FinancialNetwork};
use crate::rational::{Amount, Rational};
use crate::solvency::cascade_closure;

/// Ordered capital injections. In a minimal policy every injection equals
/// the recipient's residual shortfall given the closure of earlier steps:
/// partial bailouts never restore solvency and excess ones waste capital.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BailoutPolicy {
    pub steps: Vec<(BankId, Amount)>,
    pub total: Amount,
}

impl BailoutPolicy {
    pub fn new(steps: Vec<(BankId, Amount)>) -> Self {
        let total = steps.iter().map(|(_, a)| a.clone()).sum();
        BailoutPolicy { steps, total }
    }

    pub fn empty() -> Self {
        BailoutPolicy { steps: Vec::new(), total: Amount::zero() }
    }

    pub fn banks(&self) -> Vec<BankId> {
        self.steps.iter().map(|(b, _)| *b).collect()
    }
}

/// Debt edges the regulator pays on behalf of debtors, each with a weight
/// in [0, 1].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuaranteedPayments {
    pub entries: Vec<PaymentGuarantee>,
    pub total: Amount,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaymentGuarantee {
    pub debtor: BankId,
    pub creditor: BankId,
    pub weight: Rational,
    pub amount: Amount,
}

impl GuaranteedPayments {
    pub fn new(mut entries: Vec<PaymentGuarantee>) -> Self {
        entries.sort_by_key(|e| (e.debtor, e.creditor));
        let total = entries.iter().map(|e| e.amount.clone()).sum();
        GuaranteedPayments { entries, total }
    }

    pub fn empty() -> Self {
        GuaranteedPayments { entries: Vec::new(), total: Amount::zero() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverParams {
    pub cycle_cap: usize,
    /// Branch-and-bound node budget; on exhaustion the best incumbent is
    /// returned with `proven_optimal` false.
    pub node_budget: usize,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams { cycle_cap: DEFAULT_CYCLE_CAP, node_budget: 5_000_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Cheapest current bailout first.
    Cost,
    /// Largest closure gain first, cost as tie-break.
    Flow,
    /// Fixed ascending order of standalone shortfalls.
    Shortfall,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BailoutError {
    Cycles(CycleError),
    TooManyBanks { banks: usize, max: usize },
}

impl fmt::Display for BailoutError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BailoutError::Cycles(e) => write!(f, "{e}"),
            BailoutError::TooManyBanks { banks, max } => {
                write!(f, "exact solver supports at most {max} banks, got {banks}")
            }
        }
    }
}

impl std::error::Error for BailoutError {}

impl From<CycleError> for BailoutError {
    fn from(e: CycleError) -> Self {
        BailoutError::Cycles(e)
    }
}

/// `C_{i|X}`: the residual shortfall of `bank` once everybody in the
/// cascade closure of `given` pays in full.
pub fn bailout_cost(net: &FinancialNetwork, bank: BankId, given: &BankSet) -> Amount {
    let closure = cascade_closure(net, given).union;
    cost_given_closure(net, bank, &closure)
}

fn cost_given_closure(net: &FinancialNetwork, bank: BankId, closure: &BankSet) -> Amount {
    let mut assets = net.portfolio(bank).ratio().clone();
    for (debtor, amount) in net.claims_of(bank) {
        if closure.contains(debtor) {
            assets += amount.ratio();
        }
    }
    Amount::pos_part(&(net.debt_liabilities(bank).ratio() - assets))
}

/// Re-derives each step's minimal injection. The policy is valid iff every
/// stated injection matches and the final closure covers all banks.
pub fn policy_cost(net: &FinancialNetwork, policy: &BailoutPolicy) -> (Amount, bool) {
    let mut bailed = BankSet::new();
    let mut total = Amount::zero();
    let mut valid = true;
    for (bank, stated) in &policy.steps {
        let minimal = bailout_cost(net, *bank, &bailed);
        if &minimal != stated {
            valid = false;
        }
        total += &minimal;
        bailed.insert(*bank);
    }
    if !cascade_closure(net, &bailed).covers_all(net) {
        valid = false;
    }
    (total, valid)
}

/// `(1/2) Σ_i (D_i^L − p_i)^+`: an upper bound on the minimum total
/// injection restoring systemic solvency.
pub fn half_shortfall_bound(net: &FinancialNetwork) -> Amount {
    let sum: Amount = net
        .bank_ids()
        .map(|b| Amount::pos_part(&(net.debt_liabilities(b).ratio() - net.portfolio(b).ratio())))
        .sum();
    Amount::new(sum.into_ratio() / Rational::from_integer(2.into())).expect("nonnegative")
}

/// Greedy baseline policies. All run until the closure covers every bank,
/// so they always return a valid policy; none of them is optimal in
/// general.
pub fn greedy(net: &FinancialNetwork, strategy: Strategy) -> BailoutPolicy {
    let mut bailed = BankSet::new();
    let mut closure = cascade_closure(net, &bailed).union;
    let mut steps = Vec::new();

    let shortfall_order: Vec<BankId> = match strategy {
        Strategy::Shortfall => {
            let mut order: Vec<(Amount, BankId)> = net
                .bank_ids()
                .map(|b| {
                    let s = Amount::pos_part(
                        &(net.debt_liabilities(b).ratio() - net.portfolio(b).ratio()),
                    );
                    (s, b)
                })
                .collect();
            order.sort();
            order.into_iter().map(|(_, b)| b).collect()
        }
        _ => Vec::new(),
    };
    let mut shortfall_cursor = 0;

    while closure.len() < net.bank_count() {
        let candidates: Vec<BankId> =
            net.bank_ids().filter(|b| !closure.contains(b)).collect();
        let pick = match strategy {
            Strategy::Cost => candidates
                .into_iter()
                .map(|b| (cost_given_closure(net, b, &closure), b))
                .min()
                .map(|(c, b)| (b, c)),
            Strategy::Flow => candidates
                .into_iter()
                .map(|b| {
                    let mut with = bailed.clone();
                    with.insert(b);
                    let gain = cascade_closure(net, &with).union.len();
                    (std::cmp::Reverse(gain), cost_given_closure(net, b, &closure), b)
                })
                .min()
                .map(|(_, c, b)| (b, c)),
            Strategy::Shortfall => {
                let mut choice = None;
                while shortfall_cursor < shortfall_order.len() {
                    let b = shortfall_order[shortfall_cursor];
                    shortfall_cursor += 1;
                    if !closure.contains(&b) {
                        choice = Some((b, cost_given_closure(net, b, &closure)));
                        break;
                    }
                }
                choice
            }
        };
        let Some((bank, cost)) = pick else { break };
        steps.push((bank, cost));
        bailed.insert(bank);
        closure = cascade_closure(net, &bailed).union;
    }
    BailoutPolicy::new(steps)
}

/// Exact minimum-total-amount set of full-weight guaranteed payments
/// intersecting every simple cycle, by branch-and-bound over the weighted
/// hitting set. On exactly balanced networks this is the optimal regulator
/// policy; in general its total is an upper bound on the optimal bailout.
pub fn min_payment_cover(net: &FinancialNetwork, cycles: &CycleSet) -> GuaranteedPayments {
    if cycles.is_empty() {
        return GuaranteedPayments::empty();
    }
    // universe of edges that lie on at least one cycle
    let mut edges: Vec<(BankId, BankId)> = Vec::new();
    let cycle_edges: Vec<Vec<(BankId, BankId)>> =
        cycles.cycles().iter().map(|c| c.edges()).collect();
    for es in &cycle_edges {
        for e in es {
            if !edges.contains(e) {
                edges.push(*e);
            }
        }
    }
    edges.sort();
    let weight: Vec<Rational> = edges
        .iter()
        .map(|(d, c)| net.debt_between(*d, *c).expect("cycle edge exists").ratio().clone())
        .collect();
    let edge_pos = |e: &(BankId, BankId)| edges.binary_search(e).expect("edge in universe");
    let cycle_masks: Vec<Vec<usize>> = cycle_edges
        .iter()
        .map(|es| es.iter().map(edge_pos).collect())
        .collect();

    // incumbent: the cheapest edge of every cycle (a valid cover)
    let mut seed: Vec<usize> = cycle_masks
        .iter()
        .map(|es| {
            es.iter()
                .copied()
                .min_by(|&a, &b| weight[a].cmp(&weight[b]).then(edges[a].cmp(&edges[b])))
                .expect("cycle has edges")
        })
        .collect();
    seed.sort_unstable();
    seed.dedup();
    let seed_cost: Rational = seed.iter().map(|&e| weight[e].clone()).sum();

    struct Search<'a> {
        weight: &'a [Rational],
        cycle_masks: &'a [Vec<usize>],
        best: Vec<usize>,
        best_cost: Rational,
    }
    impl Search<'_> {
        fn uncovered(&self, chosen: &[usize]) -> Option<usize> {
            self.cycle_masks
                .iter()
                .enumerate()
                .filter(|(_, es)| !es.iter().any(|e| chosen.contains(e)))
                .map(|(k, _)| k)
                .min_by_key(|&k| self.cycle_masks[k].len())
        }
        fn lower_bound(&self, chosen: &[usize]) -> Rational {
            // disjoint uncovered cycles: their cheapest edges add up
            let mut used: Vec<usize> = chosen.to_vec();
            let mut lb = Rational::zero();
            for es in self.cycle_masks {
                if es.iter().any(|e| chosen.contains(e)) {
                    continue;
                }
                if es.iter().any(|e| used.contains(e)) {
                    continue; // shares an edge with a counted cycle
                }
                let cheapest = es.iter().map(|&e| self.weight[e].clone()).min().expect("edges");
                lb += cheapest;
                used.extend_from_slice(es);
            }
            lb
        }
        fn dfs(&mut self, chosen: &mut Vec<usize>, cost: Rational) {
            let bound = &cost + self.lower_bound(chosen);
            match bound.cmp(&self.best_cost) {
                std::cmp::Ordering::Greater => return,
                std::cmp::Ordering::Equal => {
                    // only continue if a lexicographically smaller cover is possible
                    let mut probe = chosen.clone();
                    probe.sort_unstable();
                    if probe >= self.best {
                        return;
                    }
                }
                std::cmp::Ordering::Less => {}
            }
            let Some(k) = self.uncovered(chosen) else {
                let mut cover = chosen.clone();
                cover.sort_unstable();
                if cost < self.best_cost || (cost == self.best_cost && cover < self.best) {
                    self.best = cover;
                    self.best_cost = cost;
                }
                return;
            };
            let mut branch = self.cycle_masks[k].clone();
            branch.sort_unstable();
            for e in branch {
                if chosen.contains(&e) {
                    continue;
                }
                chosen.push(e);
                let next = &cost + &self.weight[e];
                self.dfs(chosen, next);
                chosen.pop();
            }
        }
    }

    let mut search = Search { weight: &weight, cycle_masks: &cycle_masks, best: seed, best_cost: seed_cost };
    search.dfs(&mut Vec::new(), Rational::zero());

    GuaranteedPayments::new(
        search
            .best
            .iter()
            .map(|&e| {
                let (debtor, creditor) = edges[e];
                PaymentGuarantee {
                    debtor,
                    creditor,
                    weight: Rational::one(),
                    amount: Amount::new(weight[e].clone()).expect("face value"),
                }
            })
            .collect(),
    )
}

use num_traits::One;

/// Result of the exact solver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactSolution {
    pub policy: BailoutPolicy,
    pub proven_optimal: bool,
    pub explored: usize,
}

const MAX_EXACT_BANKS: usize = 64;

/// Provably minimum-total-cost bailout policy.
///
/// The search explores policies that bail out at most one bank per simple
/// cycle, branching over the banks of cycles untouched by the running
/// closure (cheapest cycles first, cheapest banks within a cycle first),
/// with incumbent pruning seeded by the greedy policies, a disjoint-cycle
/// lower bound, closure-state memoization, and a dominance rule collapsing
/// candidates with identical exposures. Ties between equal-cost policies
/// break to the lexicographically smallest (length, bank sequence).
pub fn solve_exact(
    net: &FinancialNetwork,
    params: &SolverParams,
) -> Result<ExactSolution, BailoutError> {
    let n = net.bank_count();
    if n > MAX_EXACT_BANKS {
        return Err(BailoutError::TooManyBanks { banks: n, max: MAX_EXACT_BANKS });
    }
    if n == 0 {
        return Ok(ExactSolution { policy: BailoutPolicy::empty(), proven_optimal: true, explored: 0 });
    }
    let cycles = simple_cycles_capped(net, params.cycle_cap)?;
    let ctx = Ctx::new(net, &cycles);

    if ctx.closure(0) == ctx.full {
        return Ok(ExactSolution { policy: BailoutPolicy::empty(), proven_optimal: true, explored: 0 });
    }

    // incumbent from the greedy baselines
    let mut incumbent: Option<(Rational, Vec<usize>)> = None;
    for strategy in [Strategy::Cost, Strategy::Flow, Strategy::Shortfall] {
        let g = greedy(net, strategy);
        let seq: Vec<usize> = g.steps.iter().map(|(b, _)| (b.0 - 1) as usize).collect();
        let cost = g.total.ratio().clone();
        if incumbent_better(&cost, &seq, &incumbent) {
            incumbent = Some((cost, seq));
        }
    }

    let mut search = ExactSearch {
        ctx: &ctx,
        incumbent,
        memo: BTreeMap::new(),
        explored: 0,
        node_budget: params.node_budget,
        budget_hit: false,
        decision_budget: None,
        decision_found: false,
    };
    search.dfs(0, Rational::zero(), &mut Vec::new());

    let (_, seq) = search.incumbent.expect("greedy seeds guarantee an incumbent");
    let policy = ctx.replay(&seq);
    Ok(ExactSolution { policy, proven_optimal: !search.budget_hit, explored: search.explored })
}

/// True iff a full-solvency policy with total cost at most `budget` exists.
/// Shares the exact search, pruning above the budget and exiting early on
/// the first policy within it.
pub fn within_budget(
    net: &FinancialNetwork,
    budget: &Amount,
    params: &SolverParams,
) -> Result<bool, BailoutError> {
    let n = net.bank_count();
    if n > MAX_EXACT_BANKS {
        return Err(BailoutError::TooManyBanks { banks: n, max: MAX_EXACT_BANKS });
    }
    if n == 0 {
        return Ok(true);
    }
    let cycles = simple_cycles_capped(net, params.cycle_cap)?;
    let ctx = Ctx::new(net, &cycles);
    if ctx.closure(0) == ctx.full {
        return Ok(true);
    }
    let mut search = ExactSearch {
        ctx: &ctx,
        incumbent: None,
        memo: BTreeMap::new(),
        explored: 0,
        node_budget: params.node_budget,
        budget_hit: false,
        decision_budget: Some(budget.ratio().clone()),
        decision_found: false,
    };
    search.dfs(0, Rational::zero(), &mut Vec::new());
    Ok(search.decision_found)
}

/// Per-instance solver context on bitmask bank sets.
struct Ctx {
    n: usize,
    full: u64,
    weakly_balanced: bool,
    portfolio: Vec<Rational>,
    liability: Vec<Rational>,
    claims: Vec<Vec<(usize, Rational)>>, // claims[i] = (debtor, face)
    cycle_masks: Vec<u64>,
    cycle_banks: Vec<Vec<usize>>,
    /// outside-help lower bound per cycle: 0 if some member can be cleared
    /// by full payments from everyone off the cycle, else the cheapest
    /// member shortfall under that most generous assumption
    cycle_floor: Vec<Rational>,
}

impl Ctx {
    fn new(net: &FinancialNetwork, cycles: &CycleSet) -> Ctx {
        let n = net.bank_count();
        let portfolio: Vec<Rational> =
            net.bank_ids().map(|b| net.portfolio(b).ratio().clone()).collect();
        let liability: Vec<Rational> =
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
        let cycle_masks: Vec<u64> = cycles
            .cycles()
            .iter()
            .map(|c| c.banks.iter().fold(0u64, |m, b| m | 1 << (b.0 - 1)))
            .collect();
        let cycle_banks: Vec<Vec<usize>> = cycles
            .cycles()
            .iter()
            .map(|c| c.banks.iter().map(|b| (b.0 - 1) as usize).collect())
            .collect();
        let cycle_floor = cycle_banks
            .iter()
            .enumerate()
            .map(|(k, banks)| {
                banks
                    .iter()
                    .map(|&i| {
                        let outside_help: Rational = claims[i]
                            .iter()
                            .filter(|(d, _)| cycle_masks[k] >> d & 1 == 0)
                            .map(|(_, a)| a.clone())
                            .sum();
                        let gap = &liability[i] - &portfolio[i] - outside_help;
                        if gap > Rational::zero() {
                            gap
                        } else {
                            Rational::zero()
                        }
                    })
                    .min()
                    .expect("cycle has banks")
            })
            .collect();
        Ctx {
            n,
            full: if n == 64 { u64::MAX } else { (1u64 << n) - 1 },
            weakly_balanced: net.is_weakly_balanced(),
            portfolio,
            liability,
            claims,
            cycle_masks,
            cycle_banks,
            cycle_floor,
        }
    }

    fn closure(&self, bailed: u64) -> u64 {
        let mut solvent = bailed;
        loop {
            let mut grew = false;
            for i in 0..self.n {
                if solvent >> i & 1 == 1 {
                    continue;
                }
                let mut assets = self.portfolio[i].clone();
                for (d, a) in &self.claims[i] {
                    if solvent >> d & 1 == 1 {
                        assets += a;
                    }
                }
                if assets >= self.liability[i] {
                    solvent |= 1 << i;
                    grew = true;
                }
            }
            if !grew {
                return solvent;
            }
        }
    }

    fn cost(&self, i: usize, closure: u64) -> Rational {
        let mut assets = self.portfolio[i].clone();
        for (d, a) in &self.claims[i] {
            if closure >> d & 1 == 1 {
                assets += a;
            }
        }
        let gap = &self.liability[i] - assets;
        if gap > Rational::zero() {
            gap
        } else {
            Rational::zero()
        }
    }

    /// Admissible lower bound on the remaining cost: self-blocking cycles
    /// fully outside the closure, pairwise bank-disjoint, each needs at
    /// least its floor.
    fn lower_bound(&self, closure: u64) -> Rational {
        let mut picked: u64 = 0;
        let mut order: Vec<usize> = (0..self.cycle_masks.len())
            .filter(|&k| self.cycle_masks[k] & closure == 0 && self.cycle_floor[k] > Rational::zero())
            .collect();
        order.sort_by(|&a, &b| self.cycle_floor[b].cmp(&self.cycle_floor[a]));
        let mut lb = Rational::zero();
        for k in order {
            if self.cycle_masks[k] & picked != 0 {
                continue;
            }
            picked |= self.cycle_masks[k];
            lb += &self.cycle_floor[k];
        }
        lb
    }

    /// Branch candidates: banks on cycles fully outside the closure,
    /// cheapest cycle first, cheapest member first; when no such cycle
    /// exists (possible off weak balance) every insolvent bank qualifies.
    fn candidates(&self, closure: u64) -> Vec<usize> {
        let mut open: Vec<usize> = (0..self.cycle_masks.len())
            .filter(|&k| self.cycle_masks[k] & closure == 0)
            .collect();
        let mut out: Vec<usize> = Vec::new();
        if open.is_empty() {
            out = (0..self.n).filter(|&i| closure >> i & 1 == 0).collect();
            out.sort_by(|&a, &b| {
                self.cost(a, closure).cmp(&self.cost(b, closure)).then(a.cmp(&b))
            });
        } else {
            let cheapest: BTreeMap<usize, Rational> = open
                .iter()
                .map(|&k| {
                    let c = self
                        .cycle_banks[k]
                        .iter()
                        .map(|&i| self.cost(i, closure))
                        .min()
                        .expect("cycle has banks");
                    (k, c)
                })
                .collect();
            open.sort_by(|&a, &b| cheapest[&a].cmp(&cheapest[&b]).then(a.cmp(&b)));
            for k in open {
                let mut members = self.cycle_banks[k].clone();
                members.sort_by(|&a, &b| {
                    self.cost(a, closure).cmp(&self.cost(b, closure)).then(a.cmp(&b))
                });
                for i in members {
                    if !out.contains(&i) {
                        out.push(i);
                    }
                }
            }
        }
        if self.weakly_balanced {
            self.collapse_equivalent(out, closure)
        } else {
            out
        }
    }

    /// Drops candidate j when an earlier (hence no costlier) candidate i is
    /// interchangeable with it: identical debts to and from every third
    /// bank and symmetric mutual exposure. Swapping j for i in any policy
    /// then preserves all third-party cascades, and under weak balance the
    /// dropped bank still ends up solvent.
    fn collapse_equivalent(&self, candidates: Vec<usize>, closure: u64) -> Vec<usize> {
        let mut kept: Vec<usize> = Vec::new();
        'next: for j in candidates {
            for &i in &kept {
                if self.interchangeable(i, j) && self.cost(i, closure) <= self.cost(j, closure) {
                    continue 'next;
                }
            }
            kept.push(j);
        }
        kept
    }

    fn interchangeable(&self, i: usize, j: usize) -> bool {
        let claim = |a: usize, b: usize| -> Rational {
            self.claims[a]
                .iter()
                .find(|(d, _)| *d == b)
                .map(|(_, v)| v.clone())
                .unwrap_or_else(Rational::zero)
        };
        if claim(i, j) != claim(j, i) {
            return false;
        }
        for k in 0..self.n {
            if k == i || k == j {
                continue;
            }
            if claim(k, i) != claim(k, j) || claim(i, k) != claim(j, k) {
                return false;
            }
        }
        true
    }

    fn replay(&self, seq: &[usize]) -> BailoutPolicy {
        let mut bailed: u64 = 0;
        let mut steps = Vec::new();
        for &i in seq {
            let closure = self.closure(bailed);
            let c = self.cost(i, closure);
            if c > Rational::zero() {
                steps.push((BankId(i as u32 + 1), Amount::new(c).expect("positive cost")));
            }
            bailed |= 1 << i;
        }
        BailoutPolicy::new(steps)
    }
}

fn incumbent_better(cost: &Rational, seq: &[usize], incumbent: &Option<(Rational, Vec<usize>)>) -> bool {
    match incumbent {
        None => true,
        Some((c, s)) => {
            (cost, seq.len(), seq) < (c, s.len(), s)
        }
    }
}

struct ExactSearch<'a> {
    ctx: &'a Ctx,
    incumbent: Option<(Rational, Vec<usize>)>,
    memo: BTreeMap<u64, Rational>,
    explored: usize,
    node_budget: usize,
    budget_hit: bool,
    decision_budget: Option<Rational>,
    decision_found: bool,
}

impl ExactSearch<'_> {
    fn dfs(&mut self, bailed: u64, cost: Rational, seq: &mut Vec<usize>) {
        if self.decision_found || self.budget_hit {
            return;
        }
        self.explored += 1;
        if self.explored > self.node_budget {
            self.budget_hit = true;
            return;
        }
        if let Some(budget) = &self.decision_budget {
            if &cost > budget {
                return;
            }
        }
        let closure = self.ctx.closure(bailed);
        if closure == self.ctx.full {
            if self.decision_budget.is_some() {
                self.decision_found = true;
                return;
            }
            if incumbent_better(&cost, seq, &self.incumbent) {
                self.incumbent = Some((cost, seq.clone()));
            }
            return;
        }
        // strict-cost memoization: equal-cost revisits are re-explored so
        // the lexicographic tie-break stays exact
        if let Some(best) = self.memo.get(&closure) {
            if best < &cost {
                return;
            }
        }
        self.memo.insert(closure, cost.clone());

        let optimistic = &cost + self.ctx.lower_bound(closure);
        if let Some((inc, _)) = &self.incumbent {
            if &optimistic > inc {
                return;
            }
        }
        if let Some(budget) = &self.decision_budget {
            if &optimistic > budget {
                return;
            }
        }
        for i in self.ctx.candidates(closure) {
            let step = self.ctx.cost(i, closure);
            debug_assert!(step > Rational::zero(), "candidates are insolvent");
            let next = &cost + &step;
            if let Some((inc, _)) = &self.incumbent {
                if &next > inc {
                    continue;
                }
            }
            seq.push(i);
            self.dfs(bailed | 1 << i, next, seq);
            seq.pop();
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolicyError {
    /// A stated injection differs from the minimal one at its step.
    NotMinimal { bank: BankId },
    /// The policy or payment set does not restore full solvency.
    NotCovering,
    /// Claims still unpaid at a step cannot absorb the required weights
    /// (cannot occur on weakly balanced networks).
    WeightFillInfeasible { bank: BankId },
    /// A guarantee references a missing edge or carries a weight outside [0, 1].
    BadGuarantee { debtor: BankId, creditor: BankId },
}

impl fmt::Display for PolicyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolicyError::NotMinimal { bank } => {
                write!(f, "stated injection for bank {bank} is not the minimal one")
            }
            PolicyError::NotCovering => write!(f, "intervention does not restore full solvency"),
            PolicyError::WeightFillInfeasible { bank } => {
                write!(f, "unpaid claims of bank {bank} cannot absorb the injection")
            }
            PolicyError::BadGuarantee { debtor, creditor } => {
                write!(f, "bad guarantee on edge {debtor} -> {creditor}")
            }
        }
    }
}

impl std::error::Error for PolicyError {}

/// Translates a valid bailout policy into guaranteed payments with the same
/// total: each step's injection is spread over the bank's still-unpaid
/// incoming debts, largest edge first.
pub fn policy_to_payments(
    net: &FinancialNetwork,
    policy: &BailoutPolicy,
) -> Result<GuaranteedPayments, PolicyError> {
    let mut bailed = BankSet::new();
    let mut entries = Vec::new();
    for (bank, stated) in &policy.steps {
        let closure = cascade_closure(net, &bailed).union;
        let minimal = cost_given_closure(net, *bank, &closure);
        if &minimal != stated {
            return Err(PolicyError::NotMinimal { bank: *bank });
        }
        let mut unpaid: Vec<(BankId, Amount)> = net
            .claims_of(*bank)
            .iter()
            .filter(|(debtor, _)| !closure.contains(debtor))
            .cloned()
            .collect();
        unpaid.sort_by(|(di, ai), (dj, aj)| aj.cmp(ai).then(di.cmp(dj)));
        let mut remaining = stated.ratio().clone();
        for (debtor, face) in unpaid {
            if remaining.is_zero() {
                break;
            }
            let take = if face.ratio() <= &remaining { face.ratio().clone() } else { remaining.clone() };
            entries.push(PaymentGuarantee {
                debtor,
                creditor: *bank,
                weight: &take / face.ratio(),
                amount: Amount::new(take.clone()).expect("positive fill"),
            });
            remaining -= take;
        }
        if !remaining.is_zero() {
            return Err(PolicyError::WeightFillInfeasible { bank: *bank });
        }
        bailed.insert(*bank);
    }
    if !cascade_closure(net, &bailed).covers_all(net) {
        return Err(PolicyError::NotCovering);
    }
    Ok(GuaranteedPayments::new(entries))
}

/// Translates a solvency-restoring set of guaranteed payments into a
/// bailout policy with the same total: repeatedly emit any bank made
/// solvent by its guaranteed receipts plus the payments of already-solvent
/// banks, injecting exactly its guaranteed receipts.
pub fn payments_to_policy(
    net: &FinancialNetwork,
    gps: &GuaranteedPayments,
) -> Result<BailoutPolicy, PolicyError> {
    let n = net.bank_count();
    let mut receipts = vec![Rational::zero(); n];
    for e in &gps.entries {
        let face = net
            .debt_between(e.debtor, e.creditor)
            .ok_or(PolicyError::BadGuarantee { debtor: e.debtor, creditor: e.creditor })?;
        if e.weight < Rational::zero()
            || e.weight > Rational::one()
            || e.amount.ratio() != &(&e.weight * face.ratio())
        {
            return Err(PolicyError::BadGuarantee { debtor: e.debtor, creditor: e.creditor });
        }
        receipts[(e.creditor.0 - 1) as usize] += e.amount.ratio();
    }

    let mut solvent = BankSet::new();
    let mut steps = Vec::new();
    loop {
        let wave: Vec<BankId> = net
            .bank_ids()
            .filter(|b| !solvent.contains(b))
            .filter(|&b| {
                let mut assets = net.portfolio(b).ratio() + &receipts[(b.0 - 1) as usize];
                for (debtor, amount) in net.claims_of(b) {
                    if solvent.contains(debtor) {
                        assets += amount.ratio();
                    }
                }
                &assets >= net.debt_liabilities(b).ratio()
            })
            .collect();
        if wave.is_empty() {
            break;
        }
        for bank in wave {
            let g = &receipts[(bank.0 - 1) as usize];
            if !g.is_zero() {
                steps.push((bank, Amount::new(g.clone()).expect("receipts are nonnegative")));
            }
            solvent.insert(bank);
        }
    }
    if solvent.len() != n {
        return Err(PolicyError::NotCovering);
    }
    Ok(BailoutPolicy::new(steps))
}
