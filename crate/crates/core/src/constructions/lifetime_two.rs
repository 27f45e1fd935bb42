use crate::error::{Error, Result};
use crate::game::{
    is_greedy_equilibrium, is_nash_equilibrium, SearchLimits, Setting, StrategyProfile,
};
use crate::temporal::{HostGraph, IdxEdge, NodeId, Reach, TimeEdge};
use crate::util::UnionFind;

const DEFAULT_MAX_NODES: usize = 8;

/// [`lifetime2_tree_ne_with`] for hosts of at most 8 nodes.
pub fn lifetime2_tree_ne(host: &HostGraph, setting: Setting) -> Result<Option<StrategyProfile>> {
    lifetime2_tree_ne_with(host, setting, DEFAULT_MAX_NODES)
}

/// Searches for a Nash equilibrium whose realized graph is a spanning tree, on
/// a host with lifetime at most 2.
///
/// Spanning trees of time edges are enumerated in canonical order. For each
/// tree that is a terminal spanner, ownerships are tried in this order: for
/// every root, all edges bought by their lower end, then all by their upper
/// end, then every remaining assignment. Each agent buys only incident edges,
/// so the result is valid in both settings.
pub fn lifetime2_tree_ne_with(
    host: &HostGraph,
    setting: Setting,
    max_nodes: usize,
) -> Result<Option<StrategyProfile>> {
    if host.lifetime() > 2 {
        return Err(Error::PreconditionFailed(format!(
            "host lifetime is {}, expected at most 2",
            host.lifetime()
        )));
    }
    let n = host.n();
    if n > max_nodes {
        return Err(Error::SearchTooLarge(format!(
            "{n} nodes exceed the limit of {max_nodes}"
        )));
    }
    if n == 1 {
        return Ok(Some(StrategyProfile::empty(setting, host)));
    }
    let mut search = TreeSearch {
        host,
        setting,
        chosen: Vec::with_capacity(n - 1),
        arr: Vec::new(),
    };
    search.extend(0, &UnionFind::new(n))
}

struct TreeSearch<'h> {
    host: &'h HostGraph,
    setting: Setting,
    chosen: Vec<usize>,
    arr: Vec<u32>,
}

impl TreeSearch<'_> {
    fn extend(&mut self, from: usize, uf: &UnionFind) -> Result<Option<StrategyProfile>> {
        let n = self.host.n();
        if self.chosen.len() + 1 == n {
            return self.try_tree();
        }
        let m = self.host.time_edge_count();
        let missing = n - 1 - self.chosen.len();
        for id in from..=m - missing {
            let e = self.host.idx_edge(id);
            let mut next = uf.clone();
            if !next.union(e.a as usize, e.b as usize) {
                continue;
            }
            self.chosen.push(id);
            let found = self.extend(id + 1, &next)?;
            self.chosen.pop();
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }

    fn try_tree(&mut self) -> Result<Option<StrategyProfile>> {
        let edges: Vec<IdxEdge> = self
            .chosen
            .iter()
            .map(|&id| self.host.idx_edge(id))
            .collect();
        let reach = Reach::new(self.host.n(), edges.clone());
        if !reach.spans(self.host.terminal_idx(), &mut self.arr) {
            return Ok(None);
        }
        for owners in ownerships(self.host.n(), &edges) {
            let mut s = StrategyProfile::empty(self.setting, self.host);
            for (&id, &owner) in self.chosen.iter().zip(&owners) {
                let e: TimeEdge = self.host.time_edges()[id].clone();
                let agent: NodeId = self.host.nodes()[owner].clone();
                s.buy(&agent, e);
            }
            if !is_greedy_equilibrium(&s, self.host)?.is_equilibrium() {
                continue;
            }
            if is_nash_equilibrium(&s, self.host, SearchLimits::default().budget)?.is_equilibrium()
            {
                return Ok(Some(s));
            }
        }
        Ok(None)
    }
}

/// Owner (node index) per tree edge: rooted orientations first, then all
/// 2^(n−1) endpoint choices.
fn ownerships(n: usize, edges: &[IdxEdge]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut adj = vec![Vec::new(); n];
    for (i, e) in edges.iter().enumerate() {
        adj[e.a as usize].push((e.b as usize, i));
        adj[e.b as usize].push((e.a as usize, i));
    }
    for root in 0..n {
        let mut parent_side = vec![0; edges.len()];
        let mut child_side = vec![0; edges.len()];
        let mut stack = vec![(root, usize::MAX)];
        while let Some((v, from)) = stack.pop() {
            for &(w, i) in &adj[v] {
                if i != from {
                    parent_side[i] = v;
                    child_side[i] = w;
                    stack.push((w, i));
                }
            }
        }
        out.push(child_side);
        out.push(parent_side);
    }
    for mask in 0u64..1 << edges.len() {
        out.push(
            edges
                .iter()
                .enumerate()
                .map(|(i, e)| {
                    if mask >> i & 1 == 0 {
                        e.a as usize
                    } else {
                        e.b as usize
                    }
                })
                .collect(),
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::fixtures::host;
    use crate::game::realized_graph;
    use crate::temporal::te;

    #[test]
    fn single_label_host_gets_a_star() {
        let h = host(&["a", "b", "c", "d"], &["a", "b", "c", "d"], &[], 1);
        let s = lifetime2_tree_ne(&h, Setting::Local).unwrap().unwrap();
        let g = realized_graph(&s, &h).unwrap();
        assert_eq!(g.time_edge_count(), 3);
        // Canonical order picks the star around "a", with the leaves buying.
        assert_eq!(
            g.time_edges().collect::<Vec<_>>(),
            vec![te("a", "b", 1), te("a", "c", 1), te("a", "d", 1)]
        );
        assert!(s.strategy(&crate::temporal::node("a")).is_empty());
    }

    #[test]
    fn two_label_host() {
        let h = host(
            &["a", "b", "c", "d"],
            &["a", "c"],
            &[te("a", "b", 2), te("b", "c", 1), te("c", "d", 2)],
            1,
        );
        for setting in [Setting::Local, Setting::Global] {
            let s = lifetime2_tree_ne(&h, setting).unwrap().unwrap();
            assert_eq!(realized_graph(&s, &h).unwrap().time_edge_count(), 3);
        }
    }

    #[test]
    fn guards() {
        let h = host(
            &["a", "b", "c"],
            &["a"],
            &[te("a", "b", 3), te("b", "c", 2)],
            1,
        );
        assert!(matches!(
            lifetime2_tree_ne(&h, Setting::Local),
            Err(Error::PreconditionFailed(_))
        ));
        let names: Vec<String> = (0..9).map(|i| format!("n{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let big = host(&refs, &["n0"], &[], 1);
        assert!(matches!(
            lifetime2_tree_ne(&big, Setting::Local),
            Err(Error::SearchTooLarge(_))
        ));
    }
}
