//! Host graphs together with equilibria built from them.
//!
//! Every generator returns a normalized host and a strategy profile for it.
//! The outputs are not re-verified here; callers run the verifiers.

mod dense_cycle;
mod extend;
mod lifetime_two;
mod product;
mod two_terminal;

use std::collections::BTreeSet;

pub use dense_cycle::{
    dense_cycle_instance, dense_cycle_lemma_checks, DenseCycleInstance, DenseCycleNode,
    DenseCycleReport,
};
pub use extend::{extend_with_nonterminal, extend_with_terminal, TerminalExtension};
pub use lifetime_two::{lifetime2_tree_ne, lifetime2_tree_ne_with};
pub use product::{
    graph_product, hypercube_equilibrium, scale_with_nonterminals, ProductNodeId, PRODUCT_DELIMITER,
};
pub use two_terminal::two_terminal_ne;

use crate::error::{Error, Result};
use crate::game::{Setting, StrategyProfile};
use crate::temporal::{HostGraph, NodeId, TemporalGraph, TimeEdge};

/// Normalizes `raw` into a host and carries the strategies over to the new labels.
fn assemble(
    raw: TemporalGraph,
    terminals: BTreeSet<NodeId>,
    setting: Setting,
    strategies: impl IntoIterator<Item = (NodeId, Vec<TimeEdge>)>,
) -> Result<(HostGraph, StrategyProfile)> {
    let (host, map) = HostGraph::normalize(raw, terminals)?;
    let mut mapped = Vec::new();
    for (v, edges) in strategies {
        let edges = edges
            .iter()
            .map(|e| {
                map.apply(e)
                    .ok_or_else(|| Error::InvalidPurchase(e.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        mapped.push((v, edges));
    }
    let s = StrategyProfile::from_strategies(setting, &host, mapped)?;
    Ok((host, s))
}

/// `base`, or `base` followed by the smallest number making it unused in `host`.
fn fresh_id(host: &HostGraph, base: &str) -> NodeId {
    let taken = |id: &NodeId| host.graph().contains_node(id);
    let first = NodeId::new(base).expect("valid base id");
    if !taken(&first) {
        return first;
    }
    (1..)
        .map(|i| NodeId::new(format!("{base}{i}")).expect("valid id"))
        .find(|id| !taken(id))
        .expect("unbounded supply of ids")
}

/// All pairs of `nodes` with labels from `label`.
fn complete_graph(
    nodes: &[NodeId],
    label: impl Fn(usize, usize) -> BTreeSet<crate::temporal::Label>,
) -> Result<TemporalGraph> {
    let mut g = TemporalGraph::new(nodes.iter().cloned())?;
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            for l in label(i, j) {
                g.add_time_edge(&TimeEdge::new(nodes[i].clone(), nodes[j].clone(), l)?)?;
            }
        }
    }
    Ok(g)
}
