use std::collections::BTreeSet;
use std::fmt;

use super::{assemble, complete_graph};
use crate::error::{Error, Result};
use crate::game::{Setting, StrategyProfile};
use crate::temporal::{node, te, HostGraph, Label, NodeId, TimeEdge};

/// Separates the two coordinates of a product node id.
pub const PRODUCT_DELIMITER: char = '×';

/// A node (left, right) of a product host, rendered "left×right".
///
/// The right id never contains the delimiter, so splitting at the last one
/// recovers both parts even for iterated products.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProductNodeId {
    pub left: NodeId,
    pub right: NodeId,
}

impl ProductNodeId {
    pub fn parse(id: &NodeId) -> Option<Self> {
        let (l, r) = id.as_str().rsplit_once(PRODUCT_DELIMITER)?;
        Some(ProductNodeId {
            left: NodeId::new(l).ok()?,
            right: NodeId::new(r).ok()?,
        })
    }

    pub fn id(&self) -> NodeId {
        node(self.to_string())
    }
}

impl fmt::Display for ProductNodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{PRODUCT_DELIMITER}{}", self.left, self.right)
    }
}

fn pid(left: &NodeId, right: &NodeId) -> NodeId {
    ProductNodeId {
        left: left.clone(),
        right: right.clone(),
    }
    .id()
}

/// The product of two hosts with their equilibria.
///
/// Copies of H1 are indexed by the nodes of H2 and keep H1's labels; edges
/// between copies along one node of H1 get H2's labels shifted past λ^max_{H1};
/// all remaining (diagonal) edges get the single label λ^max_{H1}+λ^max_{H2}+1.
/// Every copy runs s1, and copies indexed by terminals of H1 additionally run
/// the shifted s2. Equilibria of either kind and setting are preserved.
pub fn graph_product(
    h1: &HostGraph,
    s1: &StrategyProfile,
    h2: &HostGraph,
    s2: &StrategyProfile,
) -> Result<(HostGraph, StrategyProfile)> {
    if s1.setting() != s2.setting() {
        return Err(Error::SettingMismatch);
    }
    s1.validate(h1)?;
    s2.validate(h2)?;
    if let Some(v) = h2
        .nodes()
        .iter()
        .find(|v| v.as_str().contains(PRODUCT_DELIMITER))
    {
        return Err(Error::PreconditionFailed(format!(
            "right factor node {v} contains the reserved '{PRODUCT_DELIMITER}'"
        )));
    }
    let (l1, l2) = (h1.lifetime(), h2.lifetime());
    let pairs: Vec<(&NodeId, &NodeId)> = h1
        .nodes()
        .iter()
        .flat_map(|a| h2.nodes().iter().map(move |b| (a, b)))
        .collect();
    let ids: Vec<NodeId> = pairs.iter().map(|(a, b)| pid(a, b)).collect();
    let raw = complete_graph(&ids, |i, j| {
        let ((x1, x2), (y1, y2)) = (pairs[i], pairs[j]);
        if x2 == y2 {
            h1.labels(x1, y1).expect("complete host").clone()
        } else if x1 == y1 {
            h2.labels(x2, y2)
                .expect("complete host")
                .iter()
                .map(|l| l + l1)
                .collect()
        } else {
            BTreeSet::from([l1 + l2 + 1])
        }
    })?;
    let terminals = h1
        .terminals()
        .iter()
        .flat_map(|a| h2.terminals().iter().map(move |b| pid(a, b)))
        .collect();
    let strategies = pairs.iter().map(|&(v1, v2)| {
        let mut out: Vec<TimeEdge> = s1
            .strategy(v1)
            .iter()
            .map(|e| lift(&pid(e.u(), v2), &pid(e.v(), v2), e.label()))
            .collect();
        if h1.is_terminal(v1) {
            out.extend(
                s2.strategy(v2)
                    .iter()
                    .map(|e| lift(&pid(v1, e.u()), &pid(v1, e.v()), e.label() + l1)),
            );
        }
        (pid(v1, v2), out)
    });
    assemble(raw, terminals, s1.setting(), strategies.collect::<Vec<_>>())
}

fn lift(a: &NodeId, b: &NodeId, label: Label) -> TimeEdge {
    TimeEdge::new(a.clone(), b.clone(), label).expect("distinct product nodes")
}

/// Two terminals joined by a label-1 edge that "0" buys; local setting.
fn k2() -> (HostGraph, StrategyProfile) {
    let g = crate::temporal::TemporalGraph::with_edges([node("0"), node("1")], [te("0", "1", 1)])
        .expect("valid graph");
    let host = HostGraph::normalize(g, [node("0"), node("1")].into())
        .expect("valid host")
        .0;
    let mut s = StrategyProfile::empty(Setting::Local, &host);
    s.buy(&node("0"), te("0", "1", 1));
    (host, s)
}

/// The d-fold product of K2 with itself: all 2^d nodes are terminals and the
/// local NE realizes the d-dimensional hypercube with d·2^(d−1) time edges.
pub fn hypercube_equilibrium(d: usize) -> Result<(HostGraph, StrategyProfile)> {
    if d == 0 {
        return Err(Error::PreconditionFailed(
            "dimension must be at least 1".into(),
        ));
    }
    let (base, s_base) = k2();
    let (mut h, mut s) = (base.clone(), s_base.clone());
    for _ in 1..d {
        (h, s) = graph_product(&h, &s, &base, &s_base)?;
    }
    Ok((h, s))
}

/// Product with a c-node host that has a single terminal "0" and only label 1,
/// where every other node buys its edge to "0". The result has c·k nodes, the
/// same k terminals and c·m1 + (c−1)·k bought time edges.
pub fn scale_with_nonterminals(
    h1: &HostGraph,
    s1: &StrategyProfile,
    c: usize,
) -> Result<(HostGraph, StrategyProfile)> {
    if h1.k() != h1.n() {
        return Err(Error::PreconditionFailed(
            "every node of the scaled host must be a terminal".into(),
        ));
    }
    if c == 0 {
        return Err(Error::PreconditionFailed(
            "scale factor must be at least 1".into(),
        ));
    }
    let nodes: Vec<NodeId> = (0..c).map(|i| node(i.to_string())).collect();
    let raw = complete_graph(&nodes, |_, _| BTreeSet::from([1]))?;
    let hub = nodes[0].clone();
    let star = nodes[1..]
        .iter()
        .map(|v| (v.clone(), vec![lift(v, &hub, 1)]))
        .collect::<Vec<_>>();
    let (h2, s2) = assemble(raw, [hub.clone()].into(), s1.setting(), star)?;
    graph_product(h1, s1, &h2, &s2)
}
