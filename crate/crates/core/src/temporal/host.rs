use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{terminal_indices, IdxEdge, Label, NodeId, TemporalGraph, TimeEdge};
use crate::error::{Error, Result};
use crate::util::UnionFind;

/// Old label → normalized label, as produced by [`validate_and_normalize_host`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabelMap(BTreeMap<Label, Label>);

impl LabelMap {
    pub fn get(&self, label: Label) -> Option<Label> {
        self.0.get(&label).copied()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|(a, b)| a == b)
    }

    pub fn apply(&self, e: &TimeEdge) -> Option<TimeEdge> {
        let label = self.get(e.label())?;
        TimeEdge::new(e.u().clone(), e.v().clone(), label).ok()
    }
}

/// A complete temporal graph with a nonempty terminal set and gap-free labels.
///
/// Besides the graph itself the host keeps the canonical list of all of its
/// time edges; positions in that list serve as edge ids for the game module.
#[derive(Clone, Debug)]
pub struct HostGraph {
    graph: TemporalGraph,
    terminals: BTreeSet<NodeId>,
    terminal_idx: Vec<usize>,
    edges: Vec<TimeEdge>,
    idx_edges: Vec<IdxEdge>,
    edge_ids: HashMap<IdxEdge, usize>,
}

/// Validates that `raw` is complete and `terminals` is a nonempty subset of its
/// nodes, then closes gaps in the used label range so labels run over `1..=lifetime`.
pub fn validate_and_normalize_host(
    raw: TemporalGraph,
    terminals: BTreeSet<NodeId>,
) -> Result<HostGraph> {
    HostGraph::normalize(raw, terminals).map(|(h, _)| h)
}

impl HostGraph {
    /// Like [`validate_and_normalize_host`] but also returns the label renaming,
    /// so that strategy profiles given in the old labels can be carried over.
    pub fn normalize(raw: TemporalGraph, terminals: BTreeSet<NodeId>) -> Result<(Self, LabelMap)> {
        if terminals.is_empty() {
            return Err(Error::NoTerminals);
        }
        terminal_indices(&raw, &terminals)?;
        let n = raw.node_count();
        for i in 0..n {
            for j in i + 1..n {
                if !raw.label_sets().contains_key(&(i, j)) {
                    return Err(Error::IncompleteHost(
                        raw.nodes()[i].clone(),
                        raw.nodes()[j].clone(),
                    ));
                }
            }
        }
        let used: BTreeSet<Label> = raw.label_sets().values().flatten().copied().collect();
        let map: BTreeMap<Label, Label> = used
            .iter()
            .enumerate()
            .map(|(i, &l)| (l, i as Label + 1))
            .collect();
        let mut graph = raw.edgeless_like();
        for (&(a, b), set) in raw.label_sets() {
            graph.set_labels(a, b, set.iter().map(|l| map[l]).collect());
        }
        Ok((HostGraph::from_graph(graph, terminals), LabelMap(map)))
    }

    fn from_graph(graph: TemporalGraph, terminals: BTreeSet<NodeId>) -> Self {
        let terminal_idx: Vec<usize> = terminals
            .iter()
            .map(|t| graph.index_of(t).expect("terminal in graph"))
            .collect();
        let edges: Vec<TimeEdge> = graph.time_edges().collect();
        let idx_edges: Vec<IdxEdge> = graph
            .label_sets()
            .iter()
            .flat_map(|(&(a, b), set)| {
                set.iter().map(move |&label| IdxEdge {
                    label,
                    a: a as u32,
                    b: b as u32,
                })
            })
            .collect();
        let edge_ids = idx_edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        HostGraph {
            graph,
            terminals,
            terminal_idx,
            edges,
            idx_edges,
            edge_ids,
        }
    }

    pub fn graph(&self) -> &TemporalGraph {
        &self.graph
    }

    pub fn nodes(&self) -> &[NodeId] {
        self.graph.nodes()
    }

    pub fn n(&self) -> usize {
        self.graph.node_count()
    }

    pub fn k(&self) -> usize {
        self.terminals.len()
    }

    pub fn terminals(&self) -> &BTreeSet<NodeId> {
        &self.terminals
    }

    pub fn is_terminal(&self, id: &NodeId) -> bool {
        self.terminals.contains(id)
    }

    pub fn lifetime(&self) -> Label {
        self.graph.lifetime()
    }

    pub fn is_simple(&self) -> bool {
        self.graph.is_simple()
    }

    /// All time edges of the host in canonical order.
    pub fn time_edges(&self) -> &[TimeEdge] {
        &self.edges
    }

    pub fn time_edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self, a: &NodeId, b: &NodeId) -> Option<&BTreeSet<Label>> {
        self.graph.labels(a, b)
    }

    /// Smallest label on the edge between two distinct nodes.
    pub fn min_label(&self, a: &NodeId, b: &NodeId) -> Option<Label> {
        self.labels(a, b).and_then(|s| s.first().copied())
    }

    pub fn edge_id(&self, e: &TimeEdge) -> Option<usize> {
        let a = self.graph.index_of(e.u())? as u32;
        let b = self.graph.index_of(e.v())? as u32;
        self.edge_ids
            .get(&IdxEdge {
                label: e.label(),
                a,
                b,
            })
            .copied()
    }

    pub(crate) fn idx_edge(&self, id: usize) -> IdxEdge {
        self.idx_edges[id]
    }

    pub(crate) fn terminal_idx(&self) -> &[usize] {
        &self.terminal_idx
    }

    pub(crate) fn index(&self, id: &NodeId) -> Result<usize> {
        self.graph.require(id)
    }

    /// A spanning tree whose edges all carry `label`, if one exists. Edges are
    /// taken greedily in canonical order.
    pub fn monochromatic_spanning_tree(&self, label: Label) -> Option<Vec<TimeEdge>> {
        let n = self.n();
        let mut uf = UnionFind::new(n);
        let mut tree = Vec::with_capacity(n.saturating_sub(1));
        for (id, e) in self.idx_edges.iter().enumerate() {
            if e.label == label && uf.union(e.a as usize, e.b as usize) {
                tree.push(self.edges[id].clone());
            }
        }
        (tree.len() + 1 == n || n <= 1).then_some(tree)
    }

    /// True if the edges carrying the largest label form a connected spanning subgraph.
    pub fn has_lifetime_spanning_tree(&self) -> bool {
        self.monochromatic_spanning_tree(self.lifetime()).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::temporal::{node, te};

    fn set(ids: &[&str]) -> BTreeSet<NodeId> {
        ids.iter().map(|n| node(*n)).collect()
    }

    fn raw(nodes: &[&str], edges: &[TimeEdge]) -> TemporalGraph {
        TemporalGraph::with_edges(nodes.iter().map(|n| node(*n)), edges.iter().cloned()).unwrap()
    }

    #[test]
    fn single_label_is_shifted_to_one() {
        let h = validate_and_normalize_host(raw(&["a", "b"], &[te("a", "b", 7)]), set(&["a", "b"]))
            .unwrap();
        assert_eq!(h.time_edges(), &[te("a", "b", 1)]);
        assert_eq!(h.lifetime(), 1);
    }

    #[test]
    fn gaps_are_closed() {
        let g = raw(
            &["a", "b", "c"],
            &[te("a", "b", 1), te("a", "c", 3), te("b", "c", 3)],
        );
        let (h, map) = HostGraph::normalize(g, set(&["a"])).unwrap();
        assert_eq!(
            h.time_edges(),
            &[te("a", "b", 1), te("a", "c", 2), te("b", "c", 2)]
        );
        assert_eq!(map.get(3), Some(2));
        assert!(!map.is_identity());
    }

    #[test]
    fn fig4_host_is_already_normal() {
        let g = raw(
            &["v1", "v2", "v3", "v4"],
            &[
                te("v1", "v2", 5),
                te("v1", "v3", 1),
                te("v1", "v4", 2),
                te("v2", "v3", 4),
                te("v2", "v4", 2),
                te("v3", "v4", 3),
            ],
        );
        let (h, map) = HostGraph::normalize(g.clone(), set(&["v1", "v2", "v3", "v4"])).unwrap();
        assert!(map.is_identity());
        assert_eq!(h.graph(), &g);
    }

    #[test]
    fn incomplete_host_and_missing_terminals() {
        let g = raw(&["a", "b", "c"], &[te("a", "b", 1), te("a", "c", 1)]);
        assert!(matches!(
            validate_and_normalize_host(g.clone(), set(&["a"])),
            Err(Error::IncompleteHost(_, _))
        ));
        assert!(matches!(
            validate_and_normalize_host(g.clone(), BTreeSet::new()),
            Err(Error::NoTerminals)
        ));
        assert!(matches!(
            validate_and_normalize_host(g, set(&["z"])),
            Err(Error::UnknownNode(_))
        ));
    }

    #[test]
    fn multi_label_edges_get_ids() {
        let g = raw(&["a", "b"], &[te("a", "b", 2), te("a", "b", 5)]);
        let h = validate_and_normalize_host(g, set(&["a"])).unwrap();
        assert_eq!(h.time_edge_count(), 2);
        assert_eq!(h.edge_id(&te("a", "b", 2)), Some(1));
        assert_eq!(h.min_label(&node("b"), &node("a")), Some(1));
    }
}
