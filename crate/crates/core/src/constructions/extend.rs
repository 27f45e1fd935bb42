use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{assemble, fresh_id};
use crate::error::{Error, Result};
use crate::game::{realized_graph, StrategyProfile};
use crate::temporal::{HostGraph, Label, NodeId, TemporalGraph, TimeEdge};
use crate::util::UnionFind;

/// Copy of `host` on one more node `x`: old labels move up by one, {x, near}
/// gets label 1 and every other edge at x gets λ^max_H + 1.
fn grow(host: &HostGraph, x: &NodeId, near: &NodeId) -> Result<TemporalGraph> {
    let top = host.lifetime() + 1;
    let mut g = TemporalGraph::new(host.nodes().iter().chain([x]).cloned())?;
    for e in host.time_edges() {
        g.add_time_edge(&e.shifted(1))?;
    }
    for v in host.nodes() {
        let l = if v == near { 1 } else { top };
        g.add_time_edge(&TimeEdge::new(x.clone(), v.clone(), l)?)?;
    }
    Ok(g)
}

fn shifted_strategies(s: &StrategyProfile) -> BTreeMap<NodeId, Vec<TimeEdge>> {
    s.strategies()
        .map(|(v, es)| (v.clone(), es.iter().map(|e| e.shifted(1)).collect()))
        .collect()
}

/// Adds a non-terminal `x` attached to the first node y by a label-1 edge that
/// x buys. The profile keeps its kind of equilibrium and gains one time edge.
pub fn extend_with_nonterminal(
    host: &HostGraph,
    s: &StrategyProfile,
) -> Result<(HostGraph, StrategyProfile)> {
    s.validate(host)?;
    let x = fresh_id(host, "x");
    let y = host.nodes()[0].clone();
    let raw = grow(host, &x, &y)?;
    let mut strategies = shifted_strategies(s);
    strategies.insert(x.clone(), vec![TimeEdge::new(x, y, 1)?]);
    assemble(raw, host.terminals().clone(), s.setting(), strategies)
}

/// Which branch [`extend_with_terminal`] took.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "kebab-case")]
pub enum TerminalExtension {
    /// The last-label edges of G(s) form one tree holding every terminal; the
    /// host is replaced by an all-label-1 host with a star around x.
    Star,
    /// x hangs off `a` inside the last-label tree `tree`, and `b` buys the
    /// late edge to x. `t` is a terminal outside the tree.
    Attached {
        tree: BTreeSet<NodeId>,
        t: NodeId,
        a: NodeId,
        b: NodeId,
    },
}

/// Adds a terminal x while keeping the profile an equilibrium of the same kind.
///
/// Let F be the time edges of G(s) with its largest label. If F is one tree
/// containing all terminals, the new host has label 1 everywhere and every old
/// node buys its edge to x. Otherwise take the first tree B of F (in node
/// order) that misses some terminal t, the first node a of B that buys no edge
/// of B and the first other node b of B: x buys (x,a,1) and b buys the edge to
/// x with the new largest label.
pub fn extend_with_terminal(
    host: &HostGraph,
    s: &StrategyProfile,
) -> Result<(HostGraph, StrategyProfile, TerminalExtension)> {
    let g = realized_graph(s, host)?;
    if g.time_edge_count() == 0 {
        return Err(Error::PreconditionFailed(
            "the realized graph has no edges".into(),
        ));
    }
    let last = g.lifetime();
    let f: Vec<TimeEdge> = g.time_edges().filter(|e| e.label() == last).collect();
    let index = |v: &NodeId| g.index_of(v).expect("node of G(s)");
    let mut uf = UnionFind::new(g.node_count());
    for e in &f {
        if !uf.union(index(e.u()), index(e.v())) {
            return Err(Error::PreconditionFailed(format!(
                "the label-{last} edges of G(s) contain a cycle"
            )));
        }
    }
    let mut trees: BTreeMap<usize, BTreeSet<NodeId>> = BTreeMap::new();
    for e in &f {
        for v in [e.u(), e.v()] {
            trees
                .entry(uf.find(index(v)))
                .or_default()
                .insert(v.clone());
        }
    }
    let mut trees: Vec<BTreeSet<NodeId>> = trees.into_values().collect();
    trees.sort_by(|p, q| p.first().cmp(&q.first()));
    let x = fresh_id(host, "x");

    if trees.len() == 1 && host.terminals().is_subset(&trees[0]) {
        let nodes: Vec<NodeId> = host.nodes().iter().chain([&x]).cloned().collect();
        let raw = super::complete_graph(&nodes, |_, _| BTreeSet::from([1 as Label]))?;
        let mut terminals = host.terminals().clone();
        terminals.insert(x.clone());
        let star = host
            .nodes()
            .iter()
            .map(|v| Ok((v.clone(), vec![TimeEdge::new(v.clone(), x.clone(), 1)?])))
            .collect::<Result<Vec<_>>>()?;
        let (h, p) = assemble(raw, terminals, s.setting(), star)?;
        return Ok((h, p, TerminalExtension::Star));
    }

    for tree in trees {
        let Some(t) = host.terminals().iter().find(|t| !tree.contains(*t)) else {
            continue;
        };
        let inside =
            |e: &TimeEdge| e.label() == last && tree.contains(e.u()) && tree.contains(e.v());
        let Some(a) = tree.iter().find(|v| !s.strategy(v).iter().any(inside)) else {
            continue;
        };
        let b = tree
            .iter()
            .find(|v| *v != a)
            .expect("a tree edge has two ends");
        let raw = grow(host, &x, a)?;
        let mut strategies = shifted_strategies(s);
        strategies.insert(x.clone(), vec![TimeEdge::new(x.clone(), a.clone(), 1)?]);
        strategies
            .get_mut(b)
            .expect("every agent has a strategy")
            .push(TimeEdge::new(x.clone(), b.clone(), host.lifetime() + 1)?);
        let mut terminals = host.terminals().clone();
        terminals.insert(x.clone());
        let case = TerminalExtension::Attached {
            t: t.clone(),
            a: a.clone(),
            b: b.clone(),
            tree: tree.clone(),
        };
        let (h, p) = assemble(raw, terminals, s.setting(), strategies)?;
        return Ok((h, p, case));
    }
    Err(Error::PreconditionFailed(
        "no last-label tree has a terminal outside it and a non-buyer inside".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::hypercube_equilibrium;
    use crate::game::fixtures::{fig5_left, fig5_right};
    use crate::game::{is_nash_equilibrium, Setting};
    use crate::temporal::node;

    const BUDGET: u64 = 10_000_000;

    #[test]
    fn nonterminal_extension_of_fig5_left() {
        let (h, s) = fig5_left();
        let (h2, s2) = extend_with_nonterminal(&h, &s).unwrap();
        assert_eq!((h2.n(), h2.k()), (5, h.k()));
        assert_eq!(s2.purchase_count(), s.purchase_count() + 1);
        assert_eq!(
            h2.labels(&node("x"), &node("v1")).unwrap(),
            &BTreeSet::from([1])
        );
        assert_eq!(s2.setting(), Setting::Global);
        assert!(is_nash_equilibrium(&s2, &h2, BUDGET)
            .unwrap()
            .is_equilibrium());
    }

    #[test]
    fn terminal_extension_of_fig5_right() {
        let (h, s) = fig5_right();
        let m = realized_graph(&s, &h).unwrap().time_edge_count();
        let (h1, s1, case) = extend_with_terminal(&h, &s).unwrap();
        assert!(matches!(case, TerminalExtension::Attached { .. }));
        assert_eq!((h1.n(), h1.k()), (h.n() + 1, h.k() + 1));
        assert_eq!(realized_graph(&s1, &h1).unwrap().time_edge_count(), m + 2);
        assert!(is_nash_equilibrium(&s1, &h1, BUDGET)
            .unwrap()
            .is_equilibrium());
    }

    #[test]
    fn tree_equilibrium_becomes_a_star() {
        let (h, s) = hypercube_equilibrium(1).unwrap();
        let (h1, s1, case) = extend_with_terminal(&h, &s).unwrap();
        assert_eq!(case, TerminalExtension::Star);
        assert_eq!(h1.lifetime(), 1);
        assert_eq!(s1.purchase_count(), 2);
        assert!(is_nash_equilibrium(&s1, &h1, BUDGET)
            .unwrap()
            .is_equilibrium());
    }

    #[test]
    fn fresh_id_avoids_collisions() {
        let (h, s) = hypercube_equilibrium(1).unwrap();
        let (h2, s2) = extend_with_nonterminal(&h, &s).unwrap();
        let (h3, _) = extend_with_nonterminal(&h2, &s2).unwrap();
        assert!(h3.graph().contains_node(&node("x1")));
    }

    #[test]
    fn empty_profiles_cannot_gain_a_terminal() {
        let (h, _) = fig5_right();
        let s = StrategyProfile::empty(Setting::Local, &h);
        assert!(matches!(
            extend_with_terminal(&h, &s),
            Err(Error::PreconditionFailed(_))
        ));
    }
}
