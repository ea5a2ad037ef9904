//! The interbank debt network model.
//!
//! Banks are indexed `1..=n`; index 0 is reserved for the outside sector and
//! never appears as debtor or creditor of an internal edge. A debt edge
//! `(debtor, creditor, amount)` means the debtor owes the creditor that
//! amount. Debts owed to the outside sector are carried as a per-bank
//! `ext_liability` scalar (the outside sector never lies on a cycle, so the
//! scalar carries all the information the solver needs); claims on outsiders
//! are folded into the portfolio value `p`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};

use crate::rational::{format_rational, Amount, Rational};

/// Bank index in `1..=n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BankId(pub u32);

impl fmt::Display for BankId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub type BankSet = BTreeSet<BankId>;

/// What a bank loses when it becomes insolvent.
///
/// `Canonical` costs are a fixed charge plus a share of the bank's assets,
/// `β_i = fixed + share·(p_i + d_i^A)`. `Full` is the freeze case: an
/// insolvent bank pays nothing at all and whatever comes in is consumed, so
/// its book value settles at `p_i − D_i^L`. `Canonical{share=1, fixed=0}` is
/// normalized to `Full` at validation; the two induce identical payments and
/// default sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BankruptcyCosts {
    Canonical { share: Rational, fixed: Amount },
    Full,
}

impl BankruptcyCosts {
    pub fn canonical(share: Rational, fixed: Amount) -> Self {
        BankruptcyCosts::Canonical { share, fixed }.normalized()
    }

    fn normalized(self) -> Self {
        match &self {
            BankruptcyCosts::Canonical { share, fixed } if share.is_one() && fixed.is_zero() => {
                BankruptcyCosts::Full
            }
            _ => self,
        }
    }
}

/// A raw, not-yet-checked description of a network.
#[derive(Debug, Clone)]
pub struct RawNetwork {
    pub bank_count: usize,
    pub portfolios: Vec<Amount>,
    pub ext_liabilities: Vec<Amount>,
    pub debts: Vec<(BankId, BankId, Amount)>,
    pub costs: BankruptcyCosts,
}

/// A validation failure, reported with the offending element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NetworkError {
    ZeroBanks,
    PortfolioLength { expected: usize, got: usize },
    ExtLiabilityLength { expected: usize, got: usize },
    UnknownBank { bank: BankId },
    SelfEdge { bank: BankId },
    DuplicateEdge { debtor: BankId, creditor: BankId },
    CostShareOutOfRange { share: String },
}

impl fmt::Display for NetworkError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NetworkError::ZeroBanks => write!(f, "network has no banks"),
            NetworkError::PortfolioLength { expected, got } => {
                write!(f, "expected {expected} portfolio values, got {got}")
            }
            NetworkError::ExtLiabilityLength { expected, got } => {
                write!(f, "expected {expected} external liabilities, got {got}")
            }
            NetworkError::UnknownBank { bank } => write!(f, "unknown bank id {bank}"),
            NetworkError::SelfEdge { bank } => write!(f, "self-edge on bank {bank}"),
            NetworkError::DuplicateEdge { debtor, creditor } => {
                write!(f, "duplicate edge {debtor} -> {creditor}")
            }
            NetworkError::CostShareOutOfRange { share } => {
                write!(f, "bankruptcy cost share {share} outside [0, 1]")
            }
        }
    }
}

impl std::error::Error for NetworkError {}

/// A validated interbank debt network with cached totals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinancialNetwork {
    n: usize,
    debts: BTreeMap<(BankId, BankId), Amount>,
    portfolios: Vec<Amount>,
    ext_liabilities: Vec<Amount>,
    costs: BankruptcyCosts,
    // caches derived from the edge set
    claims: Vec<Vec<(BankId, Amount)>>,      // claims[i]: (debtor j, D_{ij}) sorted by j
    obligations: Vec<Vec<(BankId, Amount)>>, // obligations[j]: (creditor i, D_{ij}) sorted by i
    debt_assets: Vec<Amount>,                // D^A_i
    debt_liabilities: Vec<Amount>,           // D^L_i, includes ext_liability
}

impl FinancialNetwork {
    /// Checks every invariant of the raw description and builds the caches.
    /// All violations are reported, not just the first.
    pub fn validate(raw: RawNetwork) -> Result<FinancialNetwork, Vec<NetworkError>> {
        let mut errors = Vec::new();
        let n = raw.bank_count;
        if n == 0 {
            errors.push(NetworkError::ZeroBanks);
        }
        if raw.portfolios.len() != n {
            errors.push(NetworkError::PortfolioLength { expected: n, got: raw.portfolios.len() });
        }
        if raw.ext_liabilities.len() != n {
            errors.push(NetworkError::ExtLiabilityLength {
                expected: n,
                got: raw.ext_liabilities.len(),
            });
        }
        if let BankruptcyCosts::Canonical { share, .. } = &raw.costs {
            if share < &Rational::zero() || share > &Rational::one() {
                errors.push(NetworkError::CostShareOutOfRange { share: format_rational(share) });
            }
        }
        let in_range = |b: BankId| b.0 >= 1 && (b.0 as usize) <= n;
        let mut debts: BTreeMap<(BankId, BankId), Amount> = BTreeMap::new();
        for (debtor, creditor, amount) in &raw.debts {
            if !in_range(*debtor) {
                errors.push(NetworkError::UnknownBank { bank: *debtor });
                continue;
            }
            if !in_range(*creditor) {
                errors.push(NetworkError::UnknownBank { bank: *creditor });
                continue;
            }
            if debtor == creditor {
                errors.push(NetworkError::SelfEdge { bank: *debtor });
                continue;
            }
            if amount.is_zero() {
                continue; // a zero debt is no debt
            }
            if debts.insert((*debtor, *creditor), amount.clone()).is_some() {
                errors.push(NetworkError::DuplicateEdge { debtor: *debtor, creditor: *creditor });
            }
        }
        if !errors.is_empty() {
            return Err(errors);
        }
        Ok(Self::from_parts(
            n,
            debts,
            raw.portfolios,
            raw.ext_liabilities,
            raw.costs.normalized(),
        ))
    }

    pub(crate) fn from_parts(
        n: usize,
        debts: BTreeMap<(BankId, BankId), Amount>,
        portfolios: Vec<Amount>,
        ext_liabilities: Vec<Amount>,
        costs: BankruptcyCosts,
    ) -> FinancialNetwork {
        let mut claims = vec![Vec::new(); n];
        let mut obligations = vec![Vec::new(); n];
        let mut debt_assets = vec![Amount::zero(); n];
        let mut debt_liabilities = ext_liabilities.clone();
        for ((debtor, creditor), amount) in &debts {
            claims[(creditor.0 - 1) as usize].push((*debtor, amount.clone()));
            obligations[(debtor.0 - 1) as usize].push((*creditor, amount.clone()));
            debt_assets[(creditor.0 - 1) as usize] += amount;
            debt_liabilities[(debtor.0 - 1) as usize] += amount;
        }
        // BTreeMap iteration orders by (debtor, creditor), so obligations are
        // already sorted; claims need a sort by debtor.
        for list in &mut claims {
            list.sort_by_key(|(j, _)| *j);
        }
        FinancialNetwork {
            n,
            debts,
            portfolios,
            ext_liabilities,
            costs,
            claims,
            obligations,
            debt_assets,
            debt_liabilities,
        }
    }

    pub fn bank_count(&self) -> usize {
        self.n
    }

    pub fn bank_ids(&self) -> impl Iterator<Item = BankId> {
        (1..=self.n as u32).map(BankId)
    }

    pub fn all_banks(&self) -> BankSet {
        self.bank_ids().collect()
    }

    fn idx(&self, bank: BankId) -> usize {
        debug_assert!(bank.0 >= 1 && (bank.0 as usize) <= self.n, "bank id out of range");
        (bank.0 - 1) as usize
    }

    /// Debt edges as (debtor, creditor, amount), ordered.
    pub fn edges(&self) -> impl Iterator<Item = (BankId, BankId, &Amount)> {
        self.debts.iter().map(|((d, c), a)| (*d, *c, a))
    }

    pub fn edge_count(&self) -> usize {
        self.debts.len()
    }

    pub fn debt_between(&self, debtor: BankId, creditor: BankId) -> Option<&Amount> {
        self.debts.get(&(debtor, creditor))
    }

    /// Claims held by `creditor`: who owes it, and how much.
    pub fn claims_of(&self, creditor: BankId) -> &[(BankId, Amount)] {
        &self.claims[self.idx(creditor)]
    }

    /// Debts owed by `debtor` to other banks (external liability not listed).
    pub fn obligations_of(&self, debtor: BankId) -> &[(BankId, Amount)] {
        &self.obligations[self.idx(debtor)]
    }

    /// Total claims `D^A_i`.
    pub fn debt_assets(&self, bank: BankId) -> &Amount {
        &self.debt_assets[self.idx(bank)]
    }

    /// Total obligations `D^L_i`, external liability included.
    pub fn debt_liabilities(&self, bank: BankId) -> &Amount {
        &self.debt_liabilities[self.idx(bank)]
    }

    pub fn portfolio(&self, bank: BankId) -> &Amount {
        &self.portfolios[self.idx(bank)]
    }

    pub fn ext_liability(&self, bank: BankId) -> &Amount {
        &self.ext_liabilities[self.idx(bank)]
    }

    pub fn costs(&self) -> &BankruptcyCosts {
        &self.costs
    }

    /// The same network with a different cost specification.
    pub fn with_costs(&self, costs: BankruptcyCosts) -> FinancialNetwork {
        let mut net = self.clone();
        net.costs = costs.normalized();
        net
    }

    /// The same network with `injections` added to the portfolios.
    pub fn with_injections(&self, injections: &[Amount]) -> FinancialNetwork {
        assert_eq!(injections.len(), self.n, "injection vector length");
        let mut net = self.clone();
        for (p, t) in net.portfolios.iter_mut().zip(injections) {
            *p += t;
        }
        net
    }

    /// Net position `D^A_i − D^L_i` as an exact rational.
    pub fn net_position(&self, bank: BankId) -> Rational {
        self.debt_assets(bank).ratio() - self.debt_liabilities(bank).ratio()
    }

    /// Per-bank balance classification.
    pub fn balance_report(&self) -> BalanceReport {
        let per_bank: Vec<BankBalance> = self
            .bank_ids()
            .map(|i| {
                let assets = self.portfolio(i).ratio() + self.debt_assets(i).ratio();
                let liab = self.debt_liabilities(i).ratio();
                let weakly_balanced = &assets >= liab;
                let exactly_balanced = &assets == liab;
                let critically_balanced = weakly_balanced
                    && self
                        .claims_of(i)
                        .iter()
                        .all(|(_, d)| &(&assets - d.ratio()) < liab);
                let unilaterally_solvent = self.portfolio(i).ratio() >= liab;
                let deficit = Amount::pos_part(&(liab - &assets));
                let shortfall = Amount::pos_part(&(liab - self.portfolio(i).ratio()));
                BankBalance {
                    weakly_balanced,
                    exactly_balanced,
                    critically_balanced,
                    unilaterally_solvent,
                    deficit,
                    shortfall,
                }
            })
            .collect();
        let all_weakly_balanced = per_bank.iter().all(|b| b.weakly_balanced);
        let all_exactly_balanced = per_bank.iter().all(|b| b.exactly_balanced);
        let all_critically_balanced = per_bank.iter().all(|b| b.critically_balanced);
        BalanceReport { per_bank, all_weakly_balanced, all_exactly_balanced, all_critically_balanced }
    }

    pub fn is_weakly_balanced(&self) -> bool {
        self.balance_report().all_weakly_balanced
    }

    /// The unique minimal injections `t_i = (D^L_i − D^A_i − p_i)^+` that make
    /// every bank weakly balanced.
    pub fn imbalance_injections(&self) -> Vec<Amount> {
        self.balance_report().per_bank.iter().map(|b| b.deficit.clone()).collect()
    }

    /// Multilateral netting: cancels directed debt cycles until none remain,
    /// preserving every bank's net position exactly. Cycles are netted in a
    /// deterministic order (shortest first, ties by lexicographic bank-id
    /// sequence), though net positions do not depend on the order.
    pub fn compress(&self) -> FinancialNetwork {
        let mut debts = self.debts.clone();
        loop {
            let Some(cycle) = shortest_cycle(self.n, &debts) else { break };
            let slack = cycle
                .iter()
                .map(|key| debts[key].clone())
                .min()
                .expect("cycle has edges");
            for key in &cycle {
                let left = debts[key].checked_sub(&slack).expect("slack is the cycle minimum");
                if left.is_zero() {
                    debts.remove(key);
                } else {
                    debts.insert(*key, left);
                }
            }
        }
        FinancialNetwork::from_parts(
            self.n,
            debts,
            self.portfolios.clone(),
            self.ext_liabilities.clone(),
            self.costs.clone(),
        )
    }

    /// Restricts the network to the banks outside `solvent`, given that the
    /// banks in `solvent` pay their debts in full in the equilibrium of
    /// interest once `transfers` are injected. Remaining banks keep their
    /// debts to each other; their portfolios absorb the transfer plus all
    /// payments from `solvent`; debts owed to `solvent` become external
    /// liabilities. Bank ids are relabeled; the mapping is retained.
    pub fn reduce_given_solvent(
        &self,
        solvent: &BankSet,
        transfers: &[Amount],
    ) -> Result<Reduction, ReduceError> {
        if transfers.len() != self.n {
            return Err(ReduceError::TransferLength { expected: self.n, got: transfers.len() });
        }
        for bank in solvent {
            if bank.0 < 1 || bank.0 as usize > self.n {
                return Err(ReduceError::UnknownBank { bank: *bank });
            }
        }
        // Consistency: every bank in `solvent` must be solvent when exactly
        // the banks in `solvent` pay in full and it keeps its transfer.
        for &bank in solvent {
            let mut assets =
                self.portfolio(bank).ratio() + transfers[self.idx(bank)].ratio();
            for (debtor, amount) in self.claims_of(bank) {
                if solvent.contains(debtor) {
                    assets += amount.ratio();
                }
            }
            if &assets < self.debt_liabilities(bank).ratio() {
                return Err(ReduceError::NotSolvent { bank });
            }
        }

        let retained: Vec<BankId> =
            self.bank_ids().filter(|b| !solvent.contains(b)).collect();
        let new_id: BTreeMap<BankId, BankId> = retained
            .iter()
            .enumerate()
            .map(|(k, old)| (*old, BankId(k as u32 + 1)))
            .collect();

        let mut portfolios = Vec::with_capacity(retained.len());
        let mut ext_liabilities = Vec::with_capacity(retained.len());
        for &old in &retained {
            let mut p = self.portfolio(old).ratio() + transfers[self.idx(old)].ratio();
            for (debtor, amount) in self.claims_of(old) {
                if solvent.contains(debtor) {
                    p += amount.ratio();
                }
            }
            portfolios.push(Amount::new(p).expect("sum of nonnegatives"));
            let mut ext = self.ext_liability(old).clone();
            for (creditor, amount) in self.obligations_of(old) {
                if solvent.contains(creditor) {
                    ext += amount;
                }
            }
            ext_liabilities.push(ext);
        }

        let mut debts = BTreeMap::new();
        for ((debtor, creditor), amount) in &self.debts {
            if let (Some(d), Some(c)) = (new_id.get(debtor), new_id.get(creditor)) {
                debts.insert((*d, *c), amount.clone());
            }
        }

        let network = FinancialNetwork::from_parts(
            retained.len(),
            debts,
            portfolios,
            ext_liabilities,
            self.costs.clone(),
        );
        Ok(Reduction { network, retained })
    }
}

/// Balance classification of one bank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BankBalance {
    /// `p_i + D^A_i ≥ D^L_i`: solvent if every incoming debt is fully paid.
    pub weakly_balanced: bool,
    /// `p_i + D^A_i = D^L_i`: no capital buffer at all.
    pub exactly_balanced: bool,
    /// Weakly balanced, but losing any single incoming debt breaks solvency.
    pub critically_balanced: bool,
    /// `p_i ≥ D^L_i`: solvent with no incoming payments at all.
    pub unilaterally_solvent: bool,
    /// `(D^L_i − D^A_i − p_i)^+`
    pub deficit: Amount,
    /// `(D^L_i − p_i)^+`
    pub shortfall: Amount,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalanceReport {
    pub per_bank: Vec<BankBalance>,
    pub all_weakly_balanced: bool,
    pub all_exactly_balanced: bool,
    pub all_critically_balanced: bool,
}

impl BalanceReport {
    pub fn bank(&self, bank: BankId) -> &BankBalance {
        &self.per_bank[(bank.0 - 1) as usize]
    }

    pub fn unilaterally_solvent_set(&self) -> BankSet {
        self.per_bank
            .iter()
            .enumerate()
            .filter(|(_, b)| b.unilaterally_solvent)
            .map(|(k, _)| BankId(k as u32 + 1))
            .collect()
    }
}

/// Result of `reduce_given_solvent`: the remaining network plus the old id of
/// every new bank (`retained[new_idx] = old_id`).
#[derive(Debug, Clone)]
pub struct Reduction {
    pub network: FinancialNetwork,
    pub retained: Vec<BankId>,
}

impl Reduction {
    pub fn old_id(&self, new: BankId) -> BankId {
        self.retained[(new.0 - 1) as usize]
    }

    pub fn new_id(&self, old: BankId) -> Option<BankId> {
        self.retained
            .iter()
            .position(|&b| b == old)
            .map(|k| BankId(k as u32 + 1))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReduceError {
    TransferLength { expected: usize, got: usize },
    UnknownBank { bank: BankId },
    /// A bank claimed solvent is not solvent under the stated transfers.
    NotSolvent { bank: BankId },
}

impl fmt::Display for ReduceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReduceError::TransferLength { expected, got } => {
                write!(f, "expected {expected} transfers, got {got}")
            }
            ReduceError::UnknownBank { bank } => write!(f, "unknown bank id {bank}"),
            ReduceError::NotSolvent { bank } => {
                write!(f, "bank {bank} is not solvent under the stated transfers")
            }
        }
    }
}

impl std::error::Error for ReduceError {}

/// Convenience builder for programmatic construction. Parallel debts between
/// the same ordered pair are merged into one edge.
#[derive(Debug, Clone)]
pub struct NetworkBuilder {
    n: usize,
    portfolios: Vec<Amount>,
    ext_liabilities: Vec<Amount>,
    debts: BTreeMap<(BankId, BankId), Amount>,
    costs: BankruptcyCosts,
}

impl NetworkBuilder {
    pub fn new(bank_count: usize) -> Self {
        NetworkBuilder {
            n: bank_count,
            portfolios: vec![Amount::zero(); bank_count],
            ext_liabilities: vec![Amount::zero(); bank_count],
            debts: BTreeMap::new(),
            costs: BankruptcyCosts::Full,
        }
    }

    pub fn portfolio(mut self, bank: u32, amount: Amount) -> Self {
        self.portfolios[(bank - 1) as usize] = amount;
        self
    }

    pub fn portfolios(mut self, amounts: Vec<Amount>) -> Self {
        self.portfolios = amounts;
        self
    }

    pub fn ext_liability(mut self, bank: u32, amount: Amount) -> Self {
        self.ext_liabilities[(bank - 1) as usize] = amount;
        self
    }

    pub fn debt(mut self, debtor: u32, creditor: u32, amount: Amount) -> Self {
        if !amount.is_zero() {
            let key = (BankId(debtor), BankId(creditor));
            let total = match self.debts.remove(&key) {
                Some(existing) => existing + amount,
                None => amount,
            };
            self.debts.insert(key, total);
        }
        self
    }

    pub fn costs(mut self, costs: BankruptcyCosts) -> Self {
        self.costs = costs;
        self
    }

    pub fn build(self) -> Result<FinancialNetwork, Vec<NetworkError>> {
        FinancialNetwork::validate(RawNetwork {
            bank_count: self.n,
            portfolios: self.portfolios,
            ext_liabilities: self.ext_liabilities,
            debts: self
                .debts
                .into_iter()
                .map(|((d, c), a)| (d, c, a))
                .collect(),
            costs: self.costs,
        })
    }
}

/// Finds the canonical next cycle to net: shortest, ties broken by the
/// lexicographically smallest bank-id sequence (each cycle rotated to start
/// at its minimal bank). Returns the cycle's edge keys, or None when acyclic.
fn shortest_cycle(
    n: usize,
    debts: &BTreeMap<(BankId, BankId), Amount>,
) -> Option<Vec<(BankId, BankId)>> {
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (debtor, creditor) in debts.keys() {
        succ[(debtor.0 - 1) as usize].push((creditor.0 - 1) as usize);
    }
    let mut best: Option<Vec<usize>> = None;
    for start in 0..n {
        // Shortest cycle whose minimal bank is `start`: BFS among banks
        // >= start, reconstructing the lexicographically smallest path by
        // always preferring the smallest successor on a shortest route.
        let mut dist_to_start = vec![usize::MAX; n];
        // reverse BFS: distance from every node to `start`
        let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (u, vs) in succ.iter().enumerate() {
            for &v in vs {
                pred[v].push(u);
            }
        }
        dist_to_start[start] = 0;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &u in &pred[v] {
                if u >= start && dist_to_start[u] == usize::MAX {
                    dist_to_start[u] = dist_to_start[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        // cycle length = 1 + min over successors u of start of dist(u -> start)
        let mut entry: Option<(usize, usize)> = None; // (len, first successor)
        let mut nexts: Vec<usize> = succ[start].iter().copied().filter(|&u| u >= start).collect();
        nexts.sort_unstable();
        for &u in &nexts {
            if dist_to_start[u] != usize::MAX {
                let len = dist_to_start[u] + 1;
                if entry.as_ref().map_or(true, |(l, _)| len < *l) {
                    entry = Some((len, u));
                }
            }
        }
        let Some((len, _)) = entry else { continue };
        if let Some(b) = &best {
            if b.len() < len {
                continue;
            }
        }
        // walk the lexicographically smallest shortest route back to start
        let mut path = vec![start];
        let mut at = start;
        let mut remaining = len;
        while remaining > 0 {
            let mut step: Vec<usize> = succ[at]
                .iter()
                .copied()
                .filter(|&u| {
                    u >= start
                        && ((remaining == 1 && u == start)
                            || (remaining > 1
                                && dist_to_start[u] != usize::MAX
                                && dist_to_start[u] == remaining - 1
                                && u != start))
                })
                .collect();
            step.sort_unstable();
            at = step[0];
            remaining -= 1;
            if remaining > 0 {
                path.push(at);
            }
        }
        let better = match &best {
            None => true,
            Some(b) => (path.len(), &path) < (b.len(), b),
        };
        if better {
            best = Some(path);
        }
    }
    best.map(|path| {
        (0..path.len())
            .map(|k| {
                let d = BankId(path[k] as u32 + 1);
                let c = BankId(path[(k + 1) % path.len()] as u32 + 1);
                (d, c)
            })
            .collect()
    })
}
