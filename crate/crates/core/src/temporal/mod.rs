//! Temporal graphs: nodes, time edges, host graphs and temporal reachability.
//!
//! Node identifiers are opaque strings ordered lexicographically; every
//! iteration in this crate follows that order so that witnesses and reports are
//! reproducible. Internally graphs are indexed by the position of a node in the
//! sorted node list, which means index order and identifier order coincide.

mod host;
mod reach;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use host::{validate_and_normalize_host, HostGraph, LabelMap};
pub use reach::{
    earliest_arrivals, is_minimal_terminal_spanner, is_terminal_spanner, reach_set,
    removable_time_edges, Arrival, ArrivalMap, Minimality,
};
pub(crate) use reach::{terminal_indices, Reach, UNREACHED};

/// A discrete time step. Labels start at 1.
pub type Label = u32;

/// Identifier of a node (and of the agent living on it).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct NodeId(String);

impl NodeId {
    pub fn new(id: impl Into<String>) -> Result<Self> {
        let id = id.into();
        if id.is_empty() {
            return Err(Error::InvalidNodeId(id, "empty"));
        }
        if id.contains('|') {
            return Err(Error::InvalidNodeId(id, "'|' is reserved for edge keys"));
        }
        Ok(NodeId(id))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for NodeId {
    type Error = Error;

    fn try_from(value: String) -> Result<Self> {
        NodeId::new(value)
    }
}

impl From<NodeId> for String {
    fn from(id: NodeId) -> String {
        id.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Convenience constructor for ids known to be valid, used by generators and tests.
///
/// Panics on an invalid id.
pub fn node(id: impl Into<String>) -> NodeId {
    NodeId::new(id).expect("valid node id")
}

/// An unordered node pair together with one time label. Endpoints are stored
/// sorted, so the derived ordering is the canonical (u, v, label) order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TimeEdge {
    u: NodeId,
    v: NodeId,
    label: Label,
}

impl TimeEdge {
    pub fn new(a: NodeId, b: NodeId, label: Label) -> Result<Self> {
        if a == b {
            return Err(Error::InvalidTimeEdge(format!("self loop at {a}")));
        }
        if label == 0 {
            return Err(Error::InvalidTimeEdge(format!("{a}|{b} has label 0")));
        }
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        Ok(TimeEdge { u, v, label })
    }

    pub fn u(&self) -> &NodeId {
        &self.u
    }

    pub fn v(&self) -> &NodeId {
        &self.v
    }

    pub fn label(&self) -> Label {
        self.label
    }

    pub fn is_incident_to(&self, x: &NodeId) -> bool {
        &self.u == x || &self.v == x
    }

    /// The endpoint opposite to `x`, if `x` is an endpoint.
    pub fn other(&self, x: &NodeId) -> Option<&NodeId> {
        if &self.u == x {
            Some(&self.v)
        } else if &self.v == x {
            Some(&self.u)
        } else {
            None
        }
    }

    /// Same pair with a shifted label.
    pub fn shifted(&self, by: Label) -> TimeEdge {
        TimeEdge {
            u: self.u.clone(),
            v: self.v.clone(),
            label: self.label + by,
        }
    }
}

impl fmt::Display for TimeEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.u, self.v, self.label)
    }
}

impl fmt::Debug for TimeEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// Serialized as the tuple [u, v, label].
impl Serialize for TimeEdge {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        (&self.u, &self.v, self.label).serialize(ser)
    }
}

impl<'de> Deserialize<'de> for TimeEdge {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let (u, v, label) = <(NodeId, NodeId, Label)>::deserialize(de)?;
        TimeEdge::new(u, v, label).map_err(serde::de::Error::custom)
    }
}

/// Shorthand for building a time edge from string ids. Panics on invalid input.
pub fn te(a: &str, b: &str, label: Label) -> TimeEdge {
    TimeEdge::new(node(a), node(b), label).expect("valid time edge")
}

/// A time edge over node indices, the unit the reachability engine works on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct IdxEdge {
    pub label: Label,
    pub a: u32,
    pub b: u32,
}

/// Undirected temporal graph with a set of labels per edge.
#[derive(Clone, PartialEq, Eq)]
pub struct TemporalGraph {
    nodes: Vec<NodeId>,
    index: HashMap<NodeId, usize>,
    labels: BTreeMap<(usize, usize), BTreeSet<Label>>,
}

impl TemporalGraph {
    /// Edgeless graph on the given nodes. Duplicates are rejected.
    pub fn new(nodes: impl IntoIterator<Item = NodeId>) -> Result<Self> {
        let set: BTreeSet<NodeId> = nodes.into_iter().collect();
        let nodes: Vec<NodeId> = set.into_iter().collect();
        let index = nodes
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), i))
            .collect();
        Ok(TemporalGraph {
            nodes,
            index,
            labels: BTreeMap::new(),
        })
    }

    pub fn with_edges(
        nodes: impl IntoIterator<Item = NodeId>,
        edges: impl IntoIterator<Item = TimeEdge>,
    ) -> Result<Self> {
        let mut g = TemporalGraph::new(nodes)?;
        for e in edges {
            g.add_time_edge(&e)?;
        }
        Ok(g)
    }

    /// Same node set, no edges.
    pub fn edgeless_like(&self) -> Self {
        TemporalGraph {
            nodes: self.nodes.clone(),
            index: self.index.clone(),
            labels: BTreeMap::new(),
        }
    }

    pub fn add_time_edge(&mut self, e: &TimeEdge) -> Result<bool> {
        let (a, b) = self.pair(e)?;
        Ok(self.labels.entry((a, b)).or_default().insert(e.label))
    }

    pub fn remove_time_edge(&mut self, e: &TimeEdge) -> bool {
        let Ok(key) = self.pair(e) else {
            return false;
        };
        let Some(set) = self.labels.get_mut(&key) else {
            return false;
        };
        let removed = set.remove(&e.label);
        if set.is_empty() {
            self.labels.remove(&key);
        }
        removed
    }

    pub fn contains_time_edge(&self, e: &TimeEdge) -> bool {
        self.pair(e)
            .ok()
            .and_then(|key| self.labels.get(&key))
            .is_some_and(|s| s.contains(&e.label))
    }

    fn pair(&self, e: &TimeEdge) -> Result<(usize, usize)> {
        let a = self.require(&e.u)?;
        let b = self.require(&e.v)?;
        Ok((a.min(b), a.max(b)))
    }

    pub(crate) fn require(&self, id: &NodeId) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownNode(id.clone()))
    }

    pub fn index_of(&self, id: &NodeId) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn contains_node(&self, id: &NodeId) -> bool {
        self.index.contains_key(id)
    }

    /// Labels of the edge between `a` and `b`, if present.
    pub fn labels(&self, a: &NodeId, b: &NodeId) -> Option<&BTreeSet<Label>> {
        let (i, j) = (self.index_of(a)?, self.index_of(b)?);
        self.labels.get(&(i.min(j), i.max(j)))
    }

    /// Edges with their label sets, in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = (&NodeId, &NodeId, &BTreeSet<Label>)> + '_ {
        self.labels
            .iter()
            .map(|(&(a, b), set)| (&self.nodes[a], &self.nodes[b], set))
    }

    /// All time edges in canonical order.
    pub fn time_edges(&self) -> impl Iterator<Item = TimeEdge> + '_ {
        self.labels.iter().flat_map(move |(&(a, b), set)| {
            set.iter().map(move |&label| TimeEdge {
                u: self.nodes[a].clone(),
                v: self.nodes[b].clone(),
                label,
            })
        })
    }

    pub fn edge_count(&self) -> usize {
        self.labels.len()
    }

    pub fn time_edge_count(&self) -> usize {
        self.labels.values().map(BTreeSet::len).sum()
    }

    /// Largest label present, 0 for an edgeless graph.
    pub fn lifetime(&self) -> Label {
        self.labels
            .values()
            .filter_map(|s| s.last().copied())
            .max()
            .unwrap_or(0)
    }

    /// One label per edge.
    pub fn is_simple(&self) -> bool {
        self.labels.values().all(|s| s.len() == 1)
    }

    /// True if `self` is a temporal subgraph of `other` on the same node set.
    pub fn is_subgraph_of(&self, other: &TemporalGraph) -> bool {
        self.nodes == other.nodes && self.time_edges().all(|e| other.contains_time_edge(&e))
    }

    pub(crate) fn idx_edges(&self) -> Vec<IdxEdge> {
        let mut out: Vec<IdxEdge> = self
            .labels
            .iter()
            .flat_map(|(&(a, b), set)| {
                set.iter().map(move |&label| IdxEdge {
                    label,
                    a: a as u32,
                    b: b as u32,
                })
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub(crate) fn idx_to_time_edge(&self, e: IdxEdge) -> TimeEdge {
        TimeEdge {
            u: self.nodes[e.a as usize].clone(),
            v: self.nodes[e.b as usize].clone(),
            label: e.label,
        }
    }

    pub(crate) fn set_labels(&mut self, a: usize, b: usize, set: BTreeSet<Label>) {
        debug_assert!(a < b && !set.is_empty());
        self.labels.insert((a, b), set);
    }

    pub(crate) fn label_sets(&self) -> &BTreeMap<(usize, usize), BTreeSet<Label>> {
        &self.labels
    }
}

impl fmt::Debug for TemporalGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TemporalGraph")
            .field("nodes", &self.nodes)
            .field("time_edges", &self.time_edges().collect::<Vec<_>>())
            .finish()
    }
}
