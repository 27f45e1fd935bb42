//! Strategies, costs, improving responses and equilibrium verification.

mod certificates;
mod dynamics;
mod response;
mod structure;
mod verify;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::temporal::{HostGraph, IdxEdge, NodeId, Reach, TemporalGraph, TimeEdge, UNREACHED};

pub use certificates::{equilibrium_certificates, Certificate, Certificates};
pub use dynamics::{greedy_dynamics, DynamicsOutcome};
pub use response::{
    find_improving_response, greedy_improving_response, GreedyMove, SearchLimits, SearchOutcome,
};
pub use structure::{
    find_forbidden_structure, find_forbidden_structure_with, necessary_terminals,
    ForbiddenStructure,
};
pub use verify::{
    is_greedy_equilibrium, is_nash_equilibrium, Deviation, EquilibriumKind, Verdict,
    VerificationReport,
};

/// Which time edges an agent may buy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Setting {
    /// Only time edges incident to the agent.
    Local,
    /// Any time edge of the host.
    Global,
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Setting::Local => "local",
            Setting::Global => "global",
        })
    }
}

impl std::str::FromStr for Setting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "local" => Ok(Setting::Local),
            "global" => Ok(Setting::Global),
            _ => Err(Error::Format(format!("unknown setting {s:?}"))),
        }
    }
}

/// One strategy (set of time edges) per agent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategyProfile {
    setting: Setting,
    strategies: BTreeMap<NodeId, BTreeSet<TimeEdge>>,
}

impl StrategyProfile {
    /// Every agent of `host` buys nothing.
    pub fn empty(setting: Setting, host: &HostGraph) -> Self {
        StrategyProfile {
            setting,
            strategies: host
                .nodes()
                .iter()
                .map(|v| (v.clone(), BTreeSet::new()))
                .collect(),
        }
    }

    /// Builds and validates a profile; agents not mentioned get an empty strategy.
    pub fn from_strategies<I, S>(setting: Setting, host: &HostGraph, strategies: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, S)>,
        S: IntoIterator<Item = TimeEdge>,
    {
        let mut s = StrategyProfile::empty(setting, host);
        for (agent, edges) in strategies {
            host.index(&agent)?;
            s.strategies.entry(agent).or_default().extend(edges);
        }
        s.validate(host)?;
        Ok(s)
    }

    pub fn setting(&self) -> Setting {
        self.setting
    }

    /// The same strategies interpreted under another setting (not re-validated).
    pub fn with_setting(mut self, setting: Setting) -> Self {
        self.setting = setting;
        self
    }

    /// S_v; empty for agents without an entry.
    pub fn strategy(&self, agent: &NodeId) -> &BTreeSet<TimeEdge> {
        static EMPTY: BTreeSet<TimeEdge> = BTreeSet::new();
        self.strategies.get(agent).unwrap_or(&EMPTY)
    }

    pub fn strategies(&self) -> impl Iterator<Item = (&NodeId, &BTreeSet<TimeEdge>)> {
        self.strategies.iter()
    }

    pub fn set_strategy(&mut self, agent: NodeId, strategy: BTreeSet<TimeEdge>) {
        self.strategies.insert(agent, strategy);
    }

    /// Adds `e` to S_agent without validation. Returns false if already bought.
    pub fn buy(&mut self, agent: &NodeId, e: TimeEdge) -> bool {
        self.strategies.entry(agent.clone()).or_default().insert(e)
    }

    pub fn sell(&mut self, agent: &NodeId, e: &TimeEdge) -> bool {
        self.strategies.get_mut(agent).is_some_and(|s| s.remove(e))
    }

    /// Total number of purchases, counting duplicates across agents.
    pub fn purchase_count(&self) -> usize {
        self.strategies.values().map(BTreeSet::len).sum()
    }

    /// The agents that buy `e`.
    pub fn buyers<'a>(&'a self, e: &'a TimeEdge) -> impl Iterator<Item = &'a NodeId> + 'a {
        self.strategies
            .iter()
            .filter(move |(_, s)| s.contains(e))
            .map(|(v, _)| v)
    }

    /// True if no time edge is bought by two agents.
    pub fn is_pairwise_disjoint(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.strategies.values().flatten().all(|e| seen.insert(e))
    }

    /// Checks agents, purchases and the locality restriction against `host`.
    pub fn validate(&self, host: &HostGraph) -> Result<()> {
        for (agent, edges) in &self.strategies {
            host.index(agent)?;
            for e in edges {
                if host.edge_id(e).is_none() {
                    return Err(Error::InvalidPurchase(e.clone()));
                }
                if self.setting == Setting::Local && !e.is_incident_to(agent) {
                    return Err(Error::NotIncident {
                        agent: agent.clone(),
                        edge: e.clone(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// An agent's cost. The derived order compares unreached terminals first,
/// which equals comparing `edges_bought + C * unreached_terminals` for
/// C = |Λ_H| + 1.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CostBreakdown {
    pub unreached_terminals: usize,
    pub edges_bought: usize,
}

impl CostBreakdown {
    pub fn total(&self) -> (usize, usize) {
        (self.unreached_terminals, self.edges_bought)
    }

    /// The scalar cost with C = |Λ_H| + 1.
    pub fn numeric(&self, host: &HostGraph) -> u64 {
        let c = host.time_edge_count() as u64 + 1;
        self.edges_bought as u64 + c * self.unreached_terminals as u64
    }
}

impl fmt::Display for CostBreakdown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} unreached, {} bought",
            self.unreached_terminals, self.edges_bought
        )
    }
}

/// G(s): all purchased time edges on the host's node set.
pub fn realized_graph(s: &StrategyProfile, host: &HostGraph) -> Result<TemporalGraph> {
    s.validate(host)?;
    let mut g = host.graph().edgeless_like();
    for e in s.strategies.values().flatten() {
        g.add_time_edge(e)?;
    }
    Ok(g)
}

pub fn agent_cost(v: &NodeId, s: &StrategyProfile, host: &HostGraph) -> Result<CostBreakdown> {
    let c = Compiled::new(s, host)?;
    let i = host.index(v)?;
    Ok(c.cost(i, &mut Vec::new()))
}

/// Σ_v cost_v as (unreached terminals, edges bought), summed componentwise.
pub fn social_cost(s: &StrategyProfile, host: &HostGraph) -> Result<(usize, usize)> {
    let c = Compiled::new(s, host)?;
    let mut arr = Vec::new();
    Ok((0..host.n()).fold((0, 0), |(u, m), i| {
        let cost = c.cost(i, &mut arr);
        (u + cost.unreached_terminals, m + cost.edges_bought)
    }))
}

/// A profile translated to host edge ids.
pub(crate) struct Compiled<'h> {
    pub host: &'h HostGraph,
    pub setting: Setting,
    /// Edge ids bought by each agent (indexed like the host's nodes), ascending.
    pub own: Vec<Vec<usize>>,
    /// Number of agents buying each host edge id.
    pub count: Vec<u32>,
    pub reach: Reach,
}

impl<'h> Compiled<'h> {
    pub fn new(s: &StrategyProfile, host: &'h HostGraph) -> Result<Self> {
        s.validate(host)?;
        let mut own = vec![Vec::new(); host.n()];
        let mut count = vec![0u32; host.time_edge_count()];
        for (agent, edges) in &s.strategies {
            let i = host.index(agent)?;
            for e in edges {
                let id = host
                    .edge_id(e)
                    .ok_or_else(|| Error::InvalidPurchase(e.clone()))?;
                own[i].push(id);
                count[id] += 1;
            }
            own[i].sort_unstable();
        }
        let realized = (0..count.len())
            .filter(|&id| count[id] > 0)
            .map(|id| host.idx_edge(id))
            .collect();
        Ok(Compiled {
            host,
            setting: s.setting,
            own,
            count,
            reach: Reach::new(host.n(), realized),
        })
    }

    pub fn unreached(&self, arr: &[u32]) -> usize {
        self.host
            .terminal_idx()
            .iter()
            .filter(|&&t| arr[t] == UNREACHED)
            .count()
    }

    pub fn cost(&self, v: usize, arr: &mut Vec<u32>) -> CostBreakdown {
        self.reach.arrivals(v, arr);
        CostBreakdown {
            unreached_terminals: self.unreached(arr),
            edges_bought: self.own[v].len(),
        }
    }

    /// True if some agent other than `v` buys edge `id`.
    pub fn bought_by_others(&self, v: usize, id: usize) -> bool {
        let mine = self.own[v].binary_search(&id).is_ok() as u32;
        self.count[id] > mine
    }

    /// Time edges of G(s_{-v}).
    pub fn others_edges(&self, v: usize) -> Vec<IdxEdge> {
        (0..self.count.len())
            .filter(|&id| self.bought_by_others(v, id))
            .map(|id| self.host.idx_edge(id))
            .collect()
    }

    /// Host edge ids agent `v` may buy under the profile's setting.
    pub fn purchasable(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let local = self.setting == Setting::Local;
        (0..self.count.len()).filter(move |&id| {
            let e = self.host.idx_edge(id);
            !local || e.a as usize == v || e.b as usize == v
        })
    }

    pub fn time_edge(&self, id: usize) -> TimeEdge {
        self.host.time_edges()[id].clone()
    }

    pub fn agent(&self, v: usize) -> &NodeId {
        &self.host.nodes()[v]
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    //! Small hand-built instances shared by the unit tests of this module.
    use super::*;
    use crate::temporal::{node, te, validate_and_normalize_host};

    pub fn host(nodes: &[&str], terminals: &[&str], edges: &[TimeEdge], default: u32) -> HostGraph {
        let mut g =
            TemporalGraph::with_edges(nodes.iter().map(|n| node(*n)), edges.iter().cloned())
                .unwrap();
        for (i, a) in nodes.iter().enumerate() {
            for b in &nodes[i + 1..] {
                if g.labels(&node(*a), &node(*b)).is_none() {
                    g.add_time_edge(&te(a, b, default)).unwrap();
                }
            }
        }
        validate_and_normalize_host(g, terminals.iter().map(|t| node(*t)).collect()).unwrap()
    }

    pub fn profile(setting: Setting, h: &HostGraph, s: &[(&str, &[TimeEdge])]) -> StrategyProfile {
        StrategyProfile::from_strategies(
            setting,
            h,
            s.iter().map(|(v, es)| (node(*v), es.iter().cloned())),
        )
        .unwrap()
    }

    const V: [&str; 4] = ["v1", "v2", "v3", "v4"];

    pub fn fig4() -> (HostGraph, StrategyProfile) {
        let h = host(
            &V,
            &V,
            &[
                te("v1", "v2", 5),
                te("v1", "v3", 1),
                te("v1", "v4", 2),
                te("v2", "v3", 4),
                te("v2", "v4", 2),
                te("v3", "v4", 3),
            ],
            0,
        );
        let s = profile(
            Setting::Global,
            &h,
            &[
                (
                    "v3",
                    &[te("v2", "v3", 4), te("v1", "v2", 5), te("v3", "v4", 3)],
                ),
                ("v1", &[te("v1", "v4", 2)]),
                ("v2", &[te("v2", "v4", 2)]),
            ],
        );
        (h, s)
    }

    pub fn fig5_left() -> (HostGraph, StrategyProfile) {
        let h = host(
            &V,
            &V,
            &[
                te("v1", "v2", 4),
                te("v1", "v3", 5),
                te("v1", "v4", 1),
                te("v2", "v3", 3),
                te("v2", "v4", 1),
                te("v3", "v4", 2),
            ],
            0,
        );
        let s = profile(
            Setting::Global,
            &h,
            &[
                (
                    "v3",
                    &[te("v3", "v4", 2), te("v2", "v3", 3), te("v1", "v2", 4)],
                ),
                ("v1", &[te("v1", "v4", 1)]),
                ("v2", &[te("v2", "v4", 1)]),
            ],
        );
        (h, s)
    }

    pub fn fig5_right() -> (HostGraph, StrategyProfile) {
        let nodes = ["v1", "v2", "v3", "v4", "v5", "v6"];
        let h = host(
            &nodes,
            &nodes,
            &[
                te("v1", "v2", 1),
                te("v1", "v3", 2),
                te("v1", "v4", 2),
                te("v1", "v5", 2),
                te("v2", "v6", 2),
                te("v3", "v4", 1),
                te("v4", "v5", 1),
                te("v5", "v6", 1),
                te("v2", "v5", 1),
            ],
            3,
        );
        let s = profile(
            Setting::Local,
            &h,
            &[
                (
                    "v1",
                    &[
                        te("v1", "v2", 1),
                        te("v1", "v3", 2),
                        te("v1", "v4", 2),
                        te("v1", "v5", 2),
                    ],
                ),
                ("v6", &[te("v2", "v6", 2)]),
                ("v3", &[te("v3", "v4", 1)]),
                ("v4", &[te("v4", "v5", 1)]),
                ("v5", &[te("v5", "v6", 1)]),
            ],
        );
        (h, s)
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::temporal::{node, te};

    #[test]
    fn empty_profile_realizes_edgeless_graph() {
        let (h, _) = fig4();
        let s = StrategyProfile::empty(Setting::Global, &h);
        let g = realized_graph(&s, &h).unwrap();
        assert_eq!(g.time_edge_count(), 0);
        assert_eq!(g.nodes(), h.nodes());
        assert_eq!(social_cost(&s, &h).unwrap(), (12, 0));
    }

    #[test]
    fn fig5_left_realizes_five_edges() {
        let (h, s) = fig5_left();
        let g = realized_graph(&s, &h).unwrap();
        assert_eq!(g.time_edge_count(), 5);
        assert_eq!(social_cost(&s, &h).unwrap(), (0, 5));
    }

    #[test]
    fn duplicate_purchases_merge() {
        let (h, _) = fig5_right();
        let mut s = StrategyProfile::empty(Setting::Global, &h);
        let edges = [
            te("v1", "v2", 1),
            te("v1", "v3", 2),
            te("v1", "v4", 2),
            te("v1", "v5", 2),
            te("v2", "v6", 2),
            te("v3", "v4", 1),
            te("v4", "v5", 1),
        ];
        for e in &edges {
            s.buy(&node("v1"), e.clone());
        }
        s.buy(&node("v6"), te("v2", "v6", 2));
        assert_eq!(s.purchase_count(), 8);
        assert_eq!(realized_graph(&s, &h).unwrap().time_edge_count(), 7);
        assert!(!s.is_pairwise_disjoint());
    }

    #[test]
    fn costs_on_fig4() {
        let (h, mut s) = fig4();
        let v3 = node("v3");
        let c = agent_cost(&v3, &s, &h).unwrap();
        assert_eq!(c.total(), (0, 3));
        s.set_strategy(v3.clone(), [te("v1", "v3", 1)].into());
        assert_eq!(agent_cost(&v3, &s, &h).unwrap().total(), (0, 1));
        let empty = StrategyProfile::empty(Setting::Global, &h);
        assert_eq!(agent_cost(&v3, &empty, &h).unwrap().total(), (3, 0));
        assert!(agent_cost(&node("zz"), &s, &h).is_err());
    }

    #[test]
    fn lexicographic_order_matches_numeric_cost() {
        let (h, _) = fig4();
        let a = CostBreakdown {
            unreached_terminals: 0,
            edges_bought: 6,
        };
        let b = CostBreakdown {
            unreached_terminals: 1,
            edges_bought: 0,
        };
        assert!(a < b);
        assert!(a.numeric(&h) < b.numeric(&h));
    }

    #[test]
    fn validation_rejects_bad_purchases() {
        let (h, _) = fig4();
        let bad_label = StrategyProfile::from_strategies(
            Setting::Global,
            &h,
            [(node("v1"), [te("v1", "v2", 1)])],
        );
        assert!(matches!(bad_label, Err(Error::InvalidPurchase(_))));
        let not_incident = StrategyProfile::from_strategies(
            Setting::Local,
            &h,
            [(node("v1"), [te("v2", "v3", 4)])],
        );
        assert!(matches!(not_incident, Err(Error::NotIncident { .. })));
    }
}
