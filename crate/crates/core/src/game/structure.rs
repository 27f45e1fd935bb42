use std::collections::BTreeSet;

use serde::Serialize;

use super::{realized_graph, Setting, StrategyProfile};
use crate::error::{Error, Result};
use crate::temporal::{reach_set, HostGraph, NodeId, TemporalGraph, TimeEdge};

/// A_G(e): terminals that `buyer` reaches in G(s) but not in G(s) − e.
///
/// The usual definition only covers a buyer that is an endpoint of `e`; here
/// any buyer is accepted so that global profiles can be inspected too.
pub fn necessary_terminals(
    e: &TimeEdge,
    buyer: &NodeId,
    s: &StrategyProfile,
    host: &HostGraph,
) -> Result<BTreeSet<NodeId>> {
    if !s.strategy(buyer).contains(e) {
        return Err(Error::NotOwned {
            agent: buyer.clone(),
            edge: e.clone(),
        });
    }
    let g = realized_graph(s, host)?;
    Ok(necessary_in(&g, e, buyer, host))
}

fn necessary_in(
    g: &TemporalGraph,
    e: &TimeEdge,
    buyer: &NodeId,
    host: &HostGraph,
) -> BTreeSet<NodeId> {
    let with = reach_set(g, buyer).expect("buyer in graph");
    let mut minus = g.clone();
    minus.remove_time_edge(e);
    let without = reach_set(&minus, buyer).expect("buyer in graph");
    host.terminals()
        .iter()
        .filter(|t| with.contains(*t) && !without.contains(*t))
        .cloned()
        .collect()
}

/// Nodes z, u1, u2, terminals x ≠ y and four distinct edges e_{ij}, bought by
/// u_i, with j ∈ A_G(e_{ij}), {z,u_i} ∈ G other than e_{ij}, and
/// λ({z,u_i}) ≤ λ(e_{ij}). No simple local profile contains one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ForbiddenStructure {
    pub z: NodeId,
    pub u1: NodeId,
    pub u2: NodeId,
    pub x: NodeId,
    pub y: NodeId,
    pub e1x: TimeEdge,
    pub e1y: TimeEdge,
    pub e2x: TimeEdge,
    pub e2y: TimeEdge,
}

/// Searches the realized graph of a simple local profile for the forbidden
/// structure; returning one means the reachability code is inconsistent.
pub fn find_forbidden_structure(
    s: &StrategyProfile,
    host: &HostGraph,
) -> Result<Option<ForbiddenStructure>> {
    let g = realized_graph(s, host)?;
    find_forbidden_structure_with(s, host, |e, buyer| necessary_in(&g, e, buyer, host))
}

/// A purchased edge with the terminals its buyer needs it for.
type Need = (TimeEdge, BTreeSet<NodeId>);

/// [`find_forbidden_structure`] with A_G supplied by the caller.
pub fn find_forbidden_structure_with(
    s: &StrategyProfile,
    host: &HostGraph,
    necessary: impl Fn(&TimeEdge, &NodeId) -> BTreeSet<NodeId>,
) -> Result<Option<ForbiddenStructure>> {
    if s.setting() != Setting::Local {
        return Err(Error::PreconditionFailed(
            "the forbidden structure is defined for local profiles".into(),
        ));
    }
    let g = realized_graph(s, host)?;
    if !g.is_simple() {
        return Err(Error::NotSimple);
    }
    let label = |a: &NodeId, b: &NodeId| g.labels(a, b).and_then(|l| l.first().copied());

    // For each agent u: (edge, A_G(edge)) over its purchases.
    let needs: Vec<(NodeId, Vec<Need>)> = s
        .strategies()
        .map(|(u, es)| {
            let list = es
                .iter()
                .map(|e| (e.clone(), necessary(e, u)))
                .filter(|(_, a)| !a.is_empty())
                .collect();
            (u.clone(), list)
        })
        .collect();

    for z in g.nodes() {
        // Neighbours u of z with the edges e ≠ {z,u} they buy and λ({z,u}) ≤ λ(e).
        let arms: Vec<(&NodeId, Vec<&Need>)> = needs
            .iter()
            .filter_map(|(u, list)| {
                let lz = label(z, u)?;
                let zu = TimeEdge::new(z.clone(), u.clone(), lz).ok()?;
                let usable: Vec<_> = list
                    .iter()
                    .filter(|(e, _)| *e != zu && e.label() >= lz)
                    .collect();
                (usable.len() >= 2).then_some((u, usable))
            })
            .collect();
        for (i, (u1, arm1)) in arms.iter().enumerate() {
            for (u2, arm2) in &arms[i + 1..] {
                if let Some(w) = match_arms(z, u1, arm1, u2, arm2) {
                    return Ok(Some(w));
                }
            }
        }
    }
    Ok(None)
}

fn match_arms(
    z: &NodeId,
    u1: &NodeId,
    arm1: &[&(TimeEdge, BTreeSet<NodeId>)],
    u2: &NodeId,
    arm2: &[&(TimeEdge, BTreeSet<NodeId>)],
) -> Option<ForbiddenStructure> {
    let terminals: BTreeSet<&NodeId> = arm1.iter().flat_map(|(_, a)| a).collect();
    for x in &terminals {
        for y in terminals
            .range::<&NodeId, _>((std::ops::Bound::Excluded(x), std::ops::Bound::Unbounded))
        {
            let with = |arm: &[&(TimeEdge, BTreeSet<NodeId>)], t: &NodeId| -> Vec<TimeEdge> {
                arm.iter()
                    .filter(|(_, a)| a.contains(t))
                    .map(|(e, _)| e.clone())
                    .collect()
            };
            let (c1x, c1y, c2x, c2y) = (with(arm1, x), with(arm1, y), with(arm2, x), with(arm2, y));
            for e1x in &c1x {
                for e1y in &c1y {
                    for e2x in &c2x {
                        for e2y in &c2y {
                            let all: BTreeSet<&TimeEdge> = [e1x, e1y, e2x, e2y].into();
                            if all.len() == 4 {
                                return Some(ForbiddenStructure {
                                    z: z.clone(),
                                    u1: u1.clone(),
                                    u2: u2.clone(),
                                    x: (*x).clone(),
                                    y: (*y).clone(),
                                    e1x: e1x.clone(),
                                    e1y: e1y.clone(),
                                    e2x: e2x.clone(),
                                    e2y: e2y.clone(),
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    None
}
