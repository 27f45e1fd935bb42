use std::collections::{BTreeMap, BTreeSet};

use super::{IdxEdge, Label, NodeId, TemporalGraph, TimeEdge};
use crate::error::{Error, Result};

pub(crate) const UNREACHED: u32 = u32::MAX;

/// Earliest-arrival engine over a fixed set of time edges.
///
/// Edges are processed in ascending label order. Consecutive edges of a
/// temporal path may share a label, so every label class is relaxed to a
/// fixpoint before moving on to the next one.
#[derive(Clone, Debug)]
pub(crate) struct Reach {
    n: usize,
    edges: Vec<IdxEdge>,
}

impl Reach {
    pub fn new(n: usize, mut edges: Vec<IdxEdge>) -> Self {
        edges.sort_unstable();
        Reach { n, edges }
    }

    pub fn edges(&self) -> &[IdxEdge] {
        &self.edges
    }

    /// Index of the first edge with label `>= label`.
    pub fn start_of(&self, label: Label) -> usize {
        self.edges.partition_point(|e| e.label < label)
    }

    pub fn arrivals(&self, source: usize, arr: &mut Vec<u32>) {
        arr.clear();
        arr.resize(self.n, UNREACHED);
        arr[source] = 0;
        self.propagate(0, &[], arr);
    }

    /// Re-relaxes every label class starting at edge index `start`, treating
    /// `extra` (all of one label, the label at `start`) as part of the first class.
    pub fn propagate(&self, start: usize, extra: &[IdxEdge], arr: &mut [u32]) {
        let mut i = start;
        if let Some(first) = extra.first() {
            let label = first.label;
            let end = i + self.edges[i..].partition_point(|e| e.label <= label);
            relax_group(&self.edges[i..end], extra, label, arr);
            i = end;
        }
        while i < self.edges.len() {
            let label = self.edges[i].label;
            let end = i + self.edges[i..].partition_point(|e| e.label <= label);
            relax_group(&self.edges[i..end], &[], label, arr);
            i = end;
        }
    }

    /// True iff `source` reaches every node in `targets`.
    pub fn reaches_all(&self, source: usize, targets: &[usize], arr: &mut Vec<u32>) -> bool {
        self.arrivals(source, arr);
        targets.iter().all(|&t| arr[t] != UNREACHED)
    }

    /// True iff every node reaches every target.
    pub fn spans(&self, targets: &[usize], arr: &mut Vec<u32>) -> bool {
        (0..self.n).all(|s| self.reaches_all(s, targets, arr))
    }
}

fn relax_group(group: &[IdxEdge], extra: &[IdxEdge], label: Label, arr: &mut [u32]) {
    loop {
        let mut changed = false;
        for e in group.iter().chain(extra) {
            let (a, b) = (e.a as usize, e.b as usize);
            if arr[a] <= label && arr[b] > label {
                arr[b] = label;
                changed = true;
            } else if arr[b] <= label && arr[a] > label {
                arr[a] = label;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
}

/// Earliest arrival at one node, with the time edge it was reached through.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrival {
    pub time: u32,
    pub via: Option<TimeEdge>,
}

/// Earliest arrivals from a single source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrivalMap {
    source: NodeId,
    entries: BTreeMap<NodeId, Arrival>,
}

impl ArrivalMap {
    pub fn source(&self) -> &NodeId {
        &self.source
    }

    /// Arrival time at `id`, `None` when unreachable.
    pub fn arrival(&self, id: &NodeId) -> Option<u32> {
        self.entries.get(id).map(|a| a.time)
    }

    pub fn reached(&self) -> impl Iterator<Item = (&NodeId, &Arrival)> {
        self.entries.iter()
    }

    /// The time edges of an earliest-arrival path from the source to `id`.
    pub fn path_to(&self, id: &NodeId) -> Option<Vec<TimeEdge>> {
        let mut cur = id.clone();
        let mut path = Vec::new();
        loop {
            let entry = self.entries.get(&cur)?;
            match &entry.via {
                None => break,
                Some(e) => {
                    let prev = e.other(&cur)?.clone();
                    path.push(e.clone());
                    cur = prev;
                }
            }
        }
        path.reverse();
        Some(path)
    }
}

/// Earliest arrival of every node reachable from `source`; the source arrives at time 0.
pub fn earliest_arrivals(g: &TemporalGraph, source: &NodeId) -> Result<ArrivalMap> {
    let s = g.require(source)?;
    let edges = g.idx_edges();
    let n = g.node_count();
    let mut arr = vec![UNREACHED; n];
    let mut pred: Vec<Option<IdxEdge>> = vec![None; n];
    arr[s] = 0;
    let mut i = 0;
    while i < edges.len() {
        let label = edges[i].label;
        let end = i + edges[i..].partition_point(|e| e.label <= label);
        loop {
            let mut changed = false;
            for e in &edges[i..end] {
                let (a, b) = (e.a as usize, e.b as usize);
                if arr[a] <= label && arr[b] > label {
                    arr[b] = label;
                    pred[b] = Some(*e);
                    changed = true;
                } else if arr[b] <= label && arr[a] > label {
                    arr[a] = label;
                    pred[a] = Some(*e);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        i = end;
    }
    let entries = (0..n)
        .filter(|&i| arr[i] != UNREACHED)
        .map(|i| {
            (
                g.nodes()[i].clone(),
                Arrival {
                    time: arr[i],
                    via: pred[i].map(|e| g.idx_to_time_edge(e)),
                },
            )
        })
        .collect();
    Ok(ArrivalMap {
        source: source.clone(),
        entries,
    })
}

/// The set of nodes `v` can reach, always including `v`.
pub fn reach_set(g: &TemporalGraph, v: &NodeId) -> Result<BTreeSet<NodeId>> {
    let s = g.require(v)?;
    let reach = Reach::new(g.node_count(), g.idx_edges());
    let mut arr = Vec::new();
    reach.arrivals(s, &mut arr);
    Ok(arr
        .iter()
        .enumerate()
        .filter(|(_, &a)| a != UNREACHED)
        .map(|(i, _)| g.nodes()[i].clone())
        .collect())
}

pub(crate) fn terminal_indices(
    g: &TemporalGraph,
    terminals: &BTreeSet<NodeId>,
) -> Result<Vec<usize>> {
    terminals.iter().map(|t| g.require(t)).collect()
}

/// True iff every node of `g` reaches every terminal.
pub fn is_terminal_spanner(g: &TemporalGraph, terminals: &BTreeSet<NodeId>) -> Result<bool> {
    let targets = terminal_indices(g, terminals)?;
    let reach = Reach::new(g.node_count(), g.idx_edges());
    Ok(reach.spans(&targets, &mut Vec::new()))
}

/// Outcome of an inclusion-minimality check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Minimality {
    Minimal,
    /// The first time edge (canonical order) whose removal keeps the spanner property.
    Removable(TimeEdge),
}

impl Minimality {
    pub fn is_minimal(&self) -> bool {
        matches!(self, Minimality::Minimal)
    }
}

/// Checks whether removing any single time edge breaks the terminal spanner property.
pub fn is_minimal_terminal_spanner(
    g: &TemporalGraph,
    terminals: &BTreeSet<NodeId>,
) -> Result<Minimality> {
    let targets = terminal_indices(g, terminals)?;
    let n = g.node_count();
    let edges = g.idx_edges();
    let mut arr = Vec::new();
    if !Reach::new(n, edges.clone()).spans(&targets, &mut arr) {
        return Err(Error::NotASpanner);
    }
    for e in g.time_edges() {
        if spans_without(g, &edges, &e, &targets, &mut arr) {
            return Ok(Minimality::Removable(e));
        }
    }
    Ok(Minimality::Minimal)
}

/// Every time edge of a terminal spanner whose individual removal keeps it a spanner.
pub fn removable_time_edges(
    g: &TemporalGraph,
    terminals: &BTreeSet<NodeId>,
) -> Result<Vec<TimeEdge>> {
    let targets = terminal_indices(g, terminals)?;
    let edges = g.idx_edges();
    let mut arr = Vec::new();
    if !Reach::new(g.node_count(), edges.clone()).spans(&targets, &mut arr) {
        return Err(Error::NotASpanner);
    }
    Ok(g.time_edges()
        .filter(|e| spans_without(g, &edges, e, &targets, &mut arr))
        .collect())
}

fn spans_without(
    g: &TemporalGraph,
    edges: &[IdxEdge],
    e: &TimeEdge,
    targets: &[usize],
    arr: &mut Vec<u32>,
) -> bool {
    let skip = IdxEdge {
        label: e.label(),
        a: g.index_of(e.u()).unwrap_or(0) as u32,
        b: g.index_of(e.v()).unwrap_or(0) as u32,
    };
    let rest: Vec<IdxEdge> = edges.iter().copied().filter(|&x| x != skip).collect();
    Reach::new(g.node_count(), rest).spans(targets, arr)
}
