//! Cycle structure of the debt digraph.
//!
//! Edges point debtor → creditor. Simple cycles are enumerated with
//! Johnson's algorithm, canonicalized by rotating each cycle to start at its
//! smallest bank id, and sorted lexicographically so downstream search orders
//! are reproducible. Cycle detection and the condensation use Tarjan's
//! strongly-connected-components algorithm and never enumerate.

use std::collections::BTreeSet;
use std::fmt;

use crate::network::{BankId, FinancialNetwork};

pub const DEFAULT_CYCLE_CAP: usize = 10_000;

/// One simple directed cycle: `banks[k]` owes `banks[(k+1) % len]`.
/// `banks[0]` is the smallest id on the cycle.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cycle {
    pub banks: Vec<BankId>,
}

impl Cycle {
    /// Directed edges (debtor, creditor) around the cycle.
    pub fn edges(&self) -> Vec<(BankId, BankId)> {
        (0..self.banks.len())
            .map(|k| (self.banks[k], self.banks[(k + 1) % self.banks.len()]))
            .collect()
    }

    pub fn contains(&self, bank: BankId) -> bool {
        self.banks.contains(&bank)
    }

    pub fn len(&self) -> usize {
        self.banks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.banks.is_empty()
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: Vec<String> = self.banks.iter().map(|b| b.to_string()).collect();
        write!(f, "({})", ids.join("->"))
    }
}

/// All simple cycles of a network plus a per-bank membership index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleSet {
    cycles: Vec<Cycle>,
    membership: Vec<Vec<usize>>, // membership[bank_idx] = cycle indices
}

impl CycleSet {
    fn new(n: usize, mut cycles: Vec<Cycle>) -> CycleSet {
        cycles.sort();
        cycles.dedup();
        let mut membership = vec![Vec::new(); n];
        for (k, cycle) in cycles.iter().enumerate() {
            for bank in &cycle.banks {
                membership[(bank.0 - 1) as usize].push(k);
            }
        }
        CycleSet { cycles, membership }
    }

    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    pub fn count(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn cycle(&self, k: usize) -> &Cycle {
        &self.cycles[k]
    }

    /// Indices of the cycles through `bank`.
    pub fn through(&self, bank: BankId) -> &[usize] {
        &self.membership[(bank.0 - 1) as usize]
    }

    /// Banks lying on two or more simple cycles.
    pub fn multi_cycle_banks(&self) -> BTreeSet<BankId> {
        self.membership
            .iter()
            .enumerate()
            .filter(|(_, m)| m.len() >= 2)
            .map(|(i, _)| BankId(i as u32 + 1))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CycleError {
    /// Enumeration aborted: at least `found` cycles exist, above `cap`.
    CapExceeded { cap: usize, found: usize },
}

impl fmt::Display for CycleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CycleError::CapExceeded { cap, found } => {
                write!(f, "cycle cap {cap} exceeded (at least {found} simple cycles)")
            }
        }
    }
}

impl std::error::Error for CycleError {}

/// Enumerates every simple directed cycle of the debt graph (external
/// liabilities excluded — node 0 never lies on a cycle).
pub fn simple_cycles(net: &FinancialNetwork) -> Result<CycleSet, CycleError> {
    simple_cycles_capped(net, DEFAULT_CYCLE_CAP)
}

pub fn simple_cycles_capped(net: &FinancialNetwork, cap: usize) -> Result<CycleSet, CycleError> {
    let n = net.bank_count();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            net.obligations_of(BankId(i as u32 + 1))
                .iter()
                .map(|(c, _)| (c.0 - 1) as usize)
                .collect()
        })
        .collect();
    let mut johnson = Johnson {
        adj: &adj,
        blocked: vec![false; n],
        block_list: vec![Vec::new(); n],
        stack: Vec::new(),
        out: Vec::new(),
        cap,
    };
    for start in 0..n {
        // Restrict to vertices >= start so each cycle is found exactly once,
        // rooted at its minimal bank.
        johnson.reset();
        if johnson.circuit(start, start).is_err() {
            return Err(CycleError::CapExceeded { cap, found: johnson.out.len() });
        }
    }
    let cycles = johnson
        .out
        .into_iter()
        .map(|path| Cycle { banks: path.into_iter().map(|v| BankId(v as u32 + 1)).collect() })
        .collect();
    Ok(CycleSet::new(n, cycles))
}

struct Johnson<'a> {
    adj: &'a [Vec<usize>],
    blocked: Vec<bool>,
    block_list: Vec<Vec<usize>>,
    stack: Vec<usize>,
    out: Vec<Vec<usize>>,
    cap: usize,
}

struct CapHit;

impl Johnson<'_> {
    fn reset(&mut self) {
        self.blocked.iter_mut().for_each(|b| *b = false);
        self.block_list.iter_mut().for_each(Vec::clear);
        self.stack.clear();
    }

    fn unblock(&mut self, v: usize) {
        self.blocked[v] = false;
        while let Some(w) = self.block_list[v].pop() {
            if self.blocked[w] {
                self.unblock(w);
            }
        }
    }

    fn circuit(&mut self, v: usize, start: usize) -> Result<bool, CapHit> {
        let mut found = false;
        self.stack.push(v);
        self.blocked[v] = true;
        let succ = self.adj[v].clone();
        for w in succ {
            if w < start {
                continue;
            }
            if w == start {
                if self.out.len() >= self.cap {
                    return Err(CapHit);
                }
                self.out.push(self.stack.clone());
                found = true;
            } else if !self.blocked[w] && self.circuit(w, start)? {
                found = true;
            }
        }
        if found {
            self.unblock(v);
        } else {
            for &w in &self.adj[v] {
                if w >= start && !self.block_list[w].contains(&v) {
                    self.block_list[w].push(v);
                }
            }
        }
        self.stack.pop();
        Ok(found)
    }
}

/// True iff the debt digraph contains a directed cycle. Decided by
/// strongly-connected-component analysis, no enumeration.
pub fn has_dependency_cycle(net: &FinancialNetwork) -> bool {
    condensation(net).components.iter().any(|c| c.len() >= 2)
}

/// Strongly connected components plus a topological rank per component
/// (ranks increase along directed edges of the condensation) and the
/// longest-path level from the sources (equal for unordered components).
#[derive(Debug, Clone)]
pub struct Condensation {
    pub components: Vec<Vec<BankId>>,
    pub component_of: Vec<usize>, // by bank index
    pub topo_rank: Vec<usize>,    // by component index
    pub level: Vec<usize>,        // by component index
}

impl Condensation {
    pub fn component_of_bank(&self, bank: BankId) -> usize {
        self.component_of[(bank.0 - 1) as usize]
    }
}

pub fn condensation(net: &FinancialNetwork) -> Condensation {
    let n = net.bank_count();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            net.obligations_of(BankId(i as u32 + 1))
                .iter()
                .map(|(c, _)| (c.0 - 1) as usize)
                .collect()
        })
        .collect();
    let mut t = Tarjan {
        adj: &adj,
        index: vec![usize::MAX; n],
        lowlink: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        next_index: 0,
        components: Vec::new(),
    };
    for v in 0..n {
        if t.index[v] == usize::MAX {
            t.strongconnect(v);
        }
    }
    let comp_count = t.components.len();
    let mut component_of = vec![0; n];
    let mut components = Vec::with_capacity(comp_count);
    // Tarjan pops sink-side components first; reversing the emission order
    // gives ranks that increase along condensation edges.
    for (rank, comp) in t.components.into_iter().rev().enumerate() {
        let mut banks: Vec<BankId> = comp.iter().map(|&v| BankId(v as u32 + 1)).collect();
        banks.sort();
        for &v in &comp {
            component_of[v] = rank;
        }
        components.push(banks);
    }
    let topo_rank: Vec<usize> = (0..comp_count).collect();
    // longest path from the sources; components are in topological order,
    // so one pass in rank order relaxes every condensation edge
    let mut level = vec![0usize; comp_count];
    for rank in 0..comp_count {
        for &bank in &components[rank] {
            let u = (bank.0 - 1) as usize;
            for &v in &adj[u] {
                let cv = component_of[v];
                if cv != rank && level[cv] < level[rank] + 1 {
                    level[cv] = level[rank] + 1;
                }
            }
        }
    }
    Condensation { components, component_of, topo_rank, level }
}

struct Tarjan<'a> {
    adj: &'a [Vec<usize>],
    index: Vec<usize>,
    lowlink: Vec<usize>,
    on_stack: Vec<bool>,
    stack: Vec<usize>,
    next_index: usize,
    components: Vec<Vec<usize>>,
}

impl Tarjan<'_> {
    fn strongconnect(&mut self, v: usize) {
        self.index[v] = self.next_index;
        self.lowlink[v] = self.next_index;
        self.next_index += 1;
        self.stack.push(v);
        self.on_stack[v] = true;
        for &w in &self.adj[v] {
            if self.index[w] == usize::MAX {
                self.strongconnect(w);
                self.lowlink[v] = self.lowlink[v].min(self.lowlink[w]);
            } else if self.on_stack[w] {
                self.lowlink[v] = self.lowlink[v].min(self.index[w]);
            }
        }
        if self.lowlink[v] == self.index[v] {
            let mut comp = Vec::new();
            loop {
                let w = self.stack.pop().expect("tarjan stack");
                self.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            self.components.push(comp);
        }
    }
}

/// Ordering of pairwise-disjoint cycles such that payments can only cascade
/// forward: cycles are ranked by the topological order of their strongly
/// connected components, ties broken by smallest bank id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TierOrdering {
    /// Cycle indices into the originating `CycleSet`, tier order.
    pub order: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TierError {
    /// Two of the given cycles share this bank.
    NotDisjoint { bank: BankId },
}

impl fmt::Display for TierError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TierError::NotDisjoint { bank } => {
                write!(f, "cycles are not disjoint: bank {bank} appears on more than one")
            }
        }
    }
}

impl std::error::Error for TierError {}

pub fn cycle_tiers(net: &FinancialNetwork, cycles: &CycleSet) -> Result<TierOrdering, TierError> {
    let mut seen = BTreeSet::new();
    for cycle in cycles.cycles() {
        for bank in &cycle.banks {
            if !seen.insert(*bank) {
                return Err(TierError::NotDisjoint { bank: *bank });
            }
        }
    }
    let cond = condensation(net);
    let mut order: Vec<usize> = (0..cycles.count()).collect();
    order.sort_by_key(|&k| {
        let cycle = cycles.cycle(k);
        let level = cond.level[cond.component_of_bank(cycle.banks[0])];
        (level, cycle.banks[0])
    });
    Ok(TierOrdering { order })
}
