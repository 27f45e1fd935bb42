//! Social optima (minimum terminal spanners), inclusion-minimal pruning and
//! greedy equilibria built from minimal spanners.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::{Setting, StrategyProfile};
use crate::temporal::{
    is_terminal_spanner, reach_set, terminal_indices, HostGraph, IdxEdge, NodeId, Reach,
    TemporalGraph,
};
use crate::util::{binomial, for_each_combination, UnionFind};

/// Limits for [`min_terminal_spanner`]. The search refuses instead of truncating.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpannerSearchConfig {
    /// Hosts with more time edges are rejected outright.
    pub max_candidate_edges: usize,
    /// Total number of subsets the enumeration may visit.
    pub max_subsets: u64,
}

impl Default for SpannerSearchConfig {
    fn default() -> Self {
        SpannerSearchConfig {
            max_candidate_edges: 64,
            max_subsets: 200_000_000,
        }
    }
}

/// A minimum-cardinality set of host time edges forming a terminal spanner.
///
/// Every terminal spanner is connected, so n−1 edges are needed. If one label
/// class alone spans the host, that spanning tree is returned. Otherwise all
/// subsets are enumerated by increasing size, and within a size in
/// lexicographic order of canonical edge positions; the first spanner found is returned.
pub fn min_terminal_spanner(
    host: &HostGraph,
    config: SpannerSearchConfig,
) -> Result<TemporalGraph> {
    let n = host.n();
    if n <= 1 {
        return Ok(host.graph().edgeless_like());
    }
    for label in 1..=host.lifetime() {
        if let Some(tree) = host.monochromatic_spanning_tree(label) {
            return TemporalGraph::with_edges(host.nodes().iter().cloned(), tree);
        }
    }
    let m = host.time_edge_count();
    if m > config.max_candidate_edges {
        return Err(Error::SearchTooLarge(format!(
            "{m} candidate time edges exceed the limit of {}",
            config.max_candidate_edges
        )));
    }
    let edges: Vec<IdxEdge> = (0..m).map(|id| host.idx_edge(id)).collect();
    let targets = host.terminal_idx().to_vec();
    let mut visited: u64 = 0;
    for size in n - 1..=m {
        visited = visited.saturating_add(binomial(m, size));
        if visited > config.max_subsets {
            return Err(Error::SearchTooLarge(format!(
                "spanners of size {size} need more than {} subsets",
                config.max_subsets
            )));
        }
        let found = (0..=m - size).into_par_iter().find_map_first(|first| {
            let mut hit = None;
            let mut arr = Vec::new();
            let rest = m - first - 1;
            for_each_combination(rest, size - 1, |tail| {
                let pick: Vec<usize> = std::iter::once(first)
                    .chain(tail.iter().map(|&j| first + 1 + j))
                    .collect();
                if is_spanner_subset(n, &edges, &pick, &targets, &mut arr) {
                    hit = Some(pick);
                    return false;
                }
                true
            });
            hit
        });
        if let Some(pick) = found {
            let time_edges = pick.iter().map(|&id| host.time_edges()[id].clone());
            return TemporalGraph::with_edges(host.nodes().iter().cloned(), time_edges);
        }
    }
    unreachable!("the full host is a terminal spanner")
}

fn is_spanner_subset(
    n: usize,
    edges: &[IdxEdge],
    pick: &[usize],
    targets: &[usize],
    arr: &mut Vec<u32>,
) -> bool {
    let mut uf = UnionFind::new(n);
    let mut parts = n;
    for &id in pick {
        if uf.union(edges[id].a as usize, edges[id].b as usize) {
            parts -= 1;
        }
    }
    if parts != 1 {
        return false;
    }
    let reach = Reach::new(n, pick.iter().map(|&id| edges[id]).collect());
    reach.spans(targets, arr)
}

/// Removes time edges in canonical order as long as the rest stays a terminal
/// spanner. One pass suffices: an edge that could not be removed earlier
/// cannot be removed from a smaller graph either.
pub fn prune_to_minimal(g: &TemporalGraph, terminals: &BTreeSet<NodeId>) -> Result<TemporalGraph> {
    let targets = terminal_indices(g, terminals)?;
    let n = g.node_count();
    let mut arr = Vec::new();
    let mut edges = g.idx_edges();
    if !Reach::new(n, edges.clone()).spans(&targets, &mut arr) {
        return Err(Error::NotASpanner);
    }
    let mut out = g.clone();
    for e in g.time_edges() {
        let idx = IdxEdge {
            label: e.label(),
            a: g.index_of(e.u()).expect("endpoint") as u32,
            b: g.index_of(e.v()).expect("endpoint") as u32,
        };
        let rest: Vec<IdxEdge> = edges.iter().copied().filter(|&x| x != idx).collect();
        if Reach::new(n, rest.clone()).spans(&targets, &mut arr) {
            edges = rest;
            out.remove_time_edge(&e);
        }
    }
    Ok(out)
}

/// Global profile realizing an inclusion-minimal terminal spanner `g`: each
/// time edge goes to the first node that misses a terminal once the edge is
/// gone. The result is a greedy equilibrium.
pub fn ge_from_minimal_spanner(g: &TemporalGraph, host: &HostGraph) -> Result<StrategyProfile> {
    if !g.is_subgraph_of(host.graph()) {
        let e = g
            .time_edges()
            .find(|e| !host.graph().contains_time_edge(e))
            .ok_or(Error::NotASpanner)?;
        return Err(Error::InvalidPurchase(e));
    }
    if !is_terminal_spanner(g, host.terminals())? {
        return Err(Error::NotASpanner);
    }
    let mut s = StrategyProfile::empty(Setting::Global, host);
    for e in g.time_edges() {
        let mut minus = g.clone();
        minus.remove_time_edge(&e);
        let owner = g
            .nodes()
            .iter()
            .find(|v| {
                let r = reach_set(&minus, v).expect("node in graph");
                !host.terminals().is_subset(&r)
            })
            .ok_or_else(|| Error::NotMinimal(e.clone()))?;
        s.buy(owner, e);
    }
    Ok(s)
}
