use std::collections::BTreeSet;

use super::verify::Deviation;
use super::{Compiled, CostBreakdown, StrategyProfile};
use crate::error::Result;
use crate::temporal::{HostGraph, IdxEdge, NodeId, Reach, TimeEdge, UNREACHED};

/// A single-edge strategy change.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GreedyMove {
    Add(TimeEdge),
    Remove(TimeEdge),
}

impl GreedyMove {
    pub fn edge(&self) -> &TimeEdge {
        match self {
            GreedyMove::Add(e) | GreedyMove::Remove(e) => e,
        }
    }

    pub fn apply(&self, agent: &NodeId, s: &mut StrategyProfile) {
        match self {
            GreedyMove::Add(e) => s.buy(agent, e.clone()),
            GreedyMove::Remove(e) => s.sell(agent, e),
        };
    }
}

/// The first strictly improving single add or remove for `v`. Removals are
/// tried before additions, each in canonical edge order.
pub fn greedy_improving_response(
    v: &NodeId,
    s: &StrategyProfile,
    host: &HostGraph,
) -> Result<Option<GreedyMove>> {
    let c = Compiled::new(s, host)?;
    let i = host.index(v)?;
    Ok(greedy_move(&c, i, false).map(|(m, _)| m))
}

/// Shared by verification and dynamics. With `best` set, returns the move
/// with the lowest resulting cost (first in order among equals) instead of
/// the first improving one.
pub(crate) fn greedy_move(
    c: &Compiled,
    v: usize,
    best: bool,
) -> Option<(GreedyMove, CostBreakdown)> {
    let mut arr = Vec::new();
    let current = c.cost(v, &mut arr);
    // An add costs one more edge, so it only pays off if it reaches a new
    // terminal; when it does it also beats every removal.
    if best && current.unreached_terminals > 0 {
        if let Some(add) = best_add(c, &arr, current, c.purchasable(v)) {
            return Some(add);
        }
    }
    if let Some(id) = first_removable(c, v, current.unreached_terminals) {
        let cost = CostBreakdown {
            unreached_terminals: current.unreached_terminals,
            edges_bought: current.edges_bought - 1,
        };
        return Some((GreedyMove::Remove(c.time_edge(id)), cost));
    }
    if best || current.unreached_terminals == 0 {
        return None;
    }
    first_add(c, v, &arr, current)
}

fn first_removable(c: &Compiled, v: usize, unreached: usize) -> Option<usize> {
    let mut a = Vec::new();
    c.own[v].iter().copied().find(|&id| {
        if c.bought_by_others(v, id) {
            return true;
        }
        let removed = c.host.idx_edge(id);
        let edges = c
            .reach
            .edges()
            .iter()
            .copied()
            .filter(|&e| e != removed)
            .collect();
        Reach::new(c.host.n(), edges).arrivals(v, &mut a);
        c.unreached(&a) <= unreached
    })
}

/// Unreached terminals after adding edge `id`, if it is new and lowers some arrival.
fn add_result(c: &Compiled, id: usize, arr: &[u32]) -> Option<usize> {
    if c.count[id] > 0 {
        return None;
    }
    let e = c.host.idx_edge(id);
    if !useful(e, arr) {
        return None;
    }
    let mut next = arr.to_vec();
    c.reach
        .propagate(c.reach.start_of(e.label), &[e], &mut next);
    Some(c.unreached(&next))
}

fn first_add(
    c: &Compiled,
    v: usize,
    arr: &[u32],
    current: CostBreakdown,
) -> Option<(GreedyMove, CostBreakdown)> {
    c.purchasable(v).find_map(|id| {
        let u = add_result(c, id, arr)?;
        (u < current.unreached_terminals).then(|| {
            (
                GreedyMove::Add(c.time_edge(id)),
                CostBreakdown {
                    unreached_terminals: u,
                    edges_bought: current.edges_bought + 1,
                },
            )
        })
    })
}

fn best_add(
    c: &Compiled,
    arr: &[u32],
    current: CostBreakdown,
    ids: impl Iterator<Item = usize>,
) -> Option<(GreedyMove, CostBreakdown)> {
    let mut best: Option<(usize, usize)> = None;
    for id in ids {
        if let Some(u) = add_result(c, id, arr) {
            if u < current.unreached_terminals && best.is_none_or(|(_, bu)| u < bu) {
                best = Some((id, u));
            }
        }
    }
    best.map(|(id, u)| {
        (
            GreedyMove::Add(c.time_edge(id)),
            CostBreakdown {
                unreached_terminals: u,
                edges_bought: current.edges_bought + 1,
            },
        )
    })
}

/// `e` lowers the arrival time of one of its endpoints.
fn useful(e: IdxEdge, arr: &[u32]) -> bool {
    let (x, y) = (arr[e.a as usize], arr[e.b as usize]);
    (x <= e.label && y > e.label) || (y <= e.label && x > e.label)
}

/// Bounds for [`find_improving_response`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    /// Largest deviation size tried. `None` picks |S_v|−1 when the agent
    /// already reaches every terminal and k otherwise.
    pub cap: Option<usize>,
    /// Maximum number of search nodes expanded.
    pub budget: u64,
}

impl SearchLimits {
    pub fn exact(budget: u64) -> Self {
        SearchLimits { cap: None, budget }
    }
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits::exact(20_000_000)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Improving(Deviation),
    /// No improving response within the cap. `exact` means none exists at all.
    NoImprovement {
        exact: bool,
    },
    /// The budget ran out before the search space was covered.
    Exhausted,
}

/// Searches for a strictly improving response of `v` by trying every
/// purchasable set of at most `cap` time edges, smallest sets first.
///
/// Only time edges missing from G(s_{-v}) are candidates, and a candidate is
/// added only if it lowers some arrival time given the edges chosen so far
/// (edges are chosen in nondecreasing label order). Every edge of a
/// smallest improving response passes that test in a suitable order, so the
/// pruning loses nothing.
pub fn find_improving_response(
    v: &NodeId,
    s: &StrategyProfile,
    host: &HostGraph,
    limits: SearchLimits,
) -> Result<SearchOutcome> {
    let c = Compiled::new(s, host)?;
    let i = host.index(v)?;
    Ok(search(&c, i, limits))
}

pub(crate) fn search(c: &Compiled, v: usize, limits: SearchLimits) -> SearchOutcome {
    let mut arr = Vec::new();
    let current = c.cost(v, &mut arr);
    let m = current.edges_bought;
    let cap = limits.cap.unwrap_or(if current.unreached_terminals == 0 {
        m.saturating_sub(1)
    } else {
        c.host.k()
    });

    let base = Reach::new(c.host.n(), c.others_edges(v));
    let mut cands: Vec<(IdxEdge, usize)> = c
        .purchasable(v)
        .filter(|&id| !c.bought_by_others(v, id))
        .map(|id| (c.host.idx_edge(id), id))
        .collect();
    cands.sort_unstable();

    let mut dfs = Dfs {
        base: &base,
        cands: &cands,
        terminals: c.host.terminal_idx(),
        used: vec![false; cands.len()],
        chosen: Vec::new(),
        nodes: 0,
        budget: limits.budget,
    };
    let mut start = Vec::new();
    base.arrivals(v, &mut start);

    let exact = (current.unreached_terminals == 0 && cap + 1 >= m) || cap >= cands.len();
    for d in 0..=cap.min(cands.len()) {
        // Sets of size d improve if they reach more terminals, or as many with fewer edges.
        let need = if d < m {
            current.unreached_terminals
        } else {
            current.unreached_terminals.saturating_sub(1)
        };
        if d >= m && current.unreached_terminals == 0 {
            break;
        }
        match dfs.run(&start, d, need) {
            Step::Found(unreached) => {
                let strategy: BTreeSet<TimeEdge> = dfs
                    .chosen
                    .iter()
                    .map(|&j| c.time_edge(cands[j].1))
                    .collect();
                return SearchOutcome::Improving(Deviation {
                    agent: c.agent(v).clone(),
                    strategy,
                    before: current,
                    after: CostBreakdown {
                        unreached_terminals: unreached,
                        edges_bought: d,
                    },
                });
            }
            Step::Exhausted => return SearchOutcome::Exhausted,
            Step::NotFound => {}
        }
    }
    SearchOutcome::NoImprovement { exact }
}

enum Step {
    Found(usize),
    NotFound,
    Exhausted,
}

struct Dfs<'a> {
    base: &'a Reach,
    cands: &'a [(IdxEdge, usize)],
    terminals: &'a [usize],
    used: Vec<bool>,
    chosen: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl Dfs<'_> {
    fn unreached(&self, arr: &[u32]) -> usize {
        self.terminals
            .iter()
            .filter(|&&t| arr[t] == UNREACHED)
            .count()
    }

    /// Looks for exactly `size` further edges leaving at most `need` terminals unreached.
    fn run(&mut self, arr: &[u32], size: usize, need: usize) -> Step {
        self.chosen.clear();
        self.used.iter_mut().for_each(|u| *u = false);
        self.go(arr, size, need, 0, &[])
    }

    fn go(
        &mut self,
        arr: &[u32],
        left: usize,
        need: usize,
        from: usize,
        group: &[IdxEdge],
    ) -> Step {
        if left == 0 {
            let u = self.unreached(arr);
            return if u <= need {
                Step::Found(u)
            } else {
                Step::NotFound
            };
        }
        let group_label = group.first().map(|e| e.label);
        let mut next = vec![0u32; arr.len()];
        for j in from..self.cands.len() {
            if self.used[j] {
                continue;
            }
            let e = self.cands[j].0;
            if !useful(e, arr) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Step::Exhausted;
            }
            let mut extra = if group_label == Some(e.label) {
                group.to_vec()
            } else {
                Vec::new()
            };
            extra.push(e);
            next.copy_from_slice(arr);
            self.base
                .propagate(self.base.start_of(e.label), &extra, &mut next);
            // Later picks come from this label class or above; within the
            // class any order is allowed since one edge can enable another.
            let class_start = self.cands.partition_point(|c| c.0.label < e.label);
            self.used[j] = true;
            self.chosen.push(j);
            match self.go(&next, left - 1, need, class_start, &extra) {
                Step::NotFound => {}
                other => return other,
            }
            self.chosen.pop();
            self.used[j] = false;
        }
        Step::NotFound
    }
}
