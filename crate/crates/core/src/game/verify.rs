use std::collections::BTreeSet;
use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use super::certificates::{certificates_for, Certificates};
use super::response::{greedy_move, search, SearchLimits, SearchOutcome};
use super::{Compiled, CostBreakdown, Setting, StrategyProfile};
use crate::error::Result;
use crate::temporal::{HostGraph, NodeId, TimeEdge};

/// A strategy change that strictly lowers the agent's cost.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Deviation {
    pub agent: NodeId,
    /// The agent's complete new strategy.
    pub strategy: BTreeSet<TimeEdge>,
    pub before: CostBreakdown,
    pub after: CostBreakdown,
}

impl fmt::Display for Deviation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} → {{", self.agent)?;
        for (i, e) in self.strategy.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}} ({} → {})", self.before, self.after)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum EquilibriumKind {
    #[serde(rename = "NE")]
    Nash,
    #[serde(rename = "GE")]
    Greedy,
}

impl fmt::Display for EquilibriumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EquilibriumKind::Nash => "NE",
            EquilibriumKind::Greedy => "GE",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Equilibrium,
    Refuted,
    /// A search budget ran out before every agent was cleared.
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub kind: EquilibriumKind,
    pub setting: Setting,
    pub verdict: Verdict,
    pub witness: Option<Deviation>,
    pub certificates: Certificates,
}

impl VerificationReport {
    pub fn is_equilibrium(&self) -> bool {
        self.verdict == Verdict::Equilibrium
    }

    /// Certificates that an equilibrium violates. Nonempty means a bound that
    /// must hold for every equilibrium failed.
    pub fn contradictions(&self) -> Vec<&'static str> {
        if !self.is_equilibrium() {
            return Vec::new();
        }
        self.certificates
            .iter()
            .filter(|(_, c)| !c.holds)
            .map(|(name, _)| *name)
            .collect()
    }
}

/// No agent has an improving single add or remove. The witness is the first
/// agent in node order with such a move.
pub fn is_greedy_equilibrium(s: &StrategyProfile, host: &HostGraph) -> Result<VerificationReport> {
    let c = Compiled::new(s, host)?;
    let witness = (0..host.n()).into_par_iter().find_map_first(|v| {
        let (m, after) = greedy_move(&c, v, false)?;
        let agent = c.agent(v).clone();
        let mut strategy = s.strategy(&agent).clone();
        match &m {
            super::GreedyMove::Add(e) => strategy.insert(e.clone()),
            super::GreedyMove::Remove(e) => strategy.remove(e),
        };
        Some(Deviation {
            agent,
            strategy,
            before: c.cost(v, &mut Vec::new()),
            after,
        })
    });
    report(EquilibriumKind::Greedy, s, host, witness, false)
}

/// No agent has any improving response. Agents missing a terminal are refuted
/// by buying the direct edge to it; all others are checked by an exact search
/// over strictly smaller strategies, each agent limited to `budget` search nodes.
pub fn is_nash_equilibrium(
    s: &StrategyProfile,
    host: &HostGraph,
    budget: u64,
) -> Result<VerificationReport> {
    let c = Compiled::new(s, host)?;
    let costs: Vec<CostBreakdown> = {
        let mut arr = Vec::new();
        (0..host.n()).map(|v| c.cost(v, &mut arr)).collect()
    };
    if let Some(v) = (0..host.n()).find(|&v| costs[v].unreached_terminals > 0) {
        return report(
            EquilibriumKind::Nash,
            s,
            host,
            Some(direct_fix(&c, v, costs[v])),
            false,
        );
    }
    let exhausted = AtomicBool::new(false);
    let witness = (0..host.n()).into_par_iter().find_map_first(|v| {
        match search(&c, v, SearchLimits::exact(budget)) {
            SearchOutcome::Improving(d) => Some(d),
            SearchOutcome::NoImprovement { exact } => {
                debug_assert!(exact);
                None
            }
            SearchOutcome::Exhausted => {
                exhausted.store(true, Ordering::Relaxed);
                None
            }
        }
    });
    report(
        EquilibriumKind::Nash,
        s,
        host,
        witness,
        exhausted.into_inner(),
    )
}

/// Buy the cheapest direct edge to the first unreached terminal.
fn direct_fix(c: &Compiled, v: usize, before: CostBreakdown) -> Deviation {
    let mut arr = Vec::new();
    c.reach.arrivals(v, &mut arr);
    let t = c
        .host
        .terminal_idx()
        .iter()
        .copied()
        .find(|&t| arr[t] == crate::temporal::UNREACHED)
        .expect("an unreached terminal");
    let agent = c.agent(v).clone();
    let target = c.agent(t);
    let label = c.host.min_label(&agent, target).expect("complete host");
    let e = TimeEdge::new(agent.clone(), target.clone(), label).expect("distinct nodes");
    let mut strategy: BTreeSet<TimeEdge> = c.own[v].iter().map(|&id| c.time_edge(id)).collect();
    strategy.insert(e.clone());

    // Compute the actual cost after the change.
    let mut edges = c.reach.edges().to_vec();
    edges.push(c.host.idx_edge(c.host.edge_id(&e).expect("host edge")));
    let reach = crate::temporal::Reach::new(c.host.n(), edges);
    reach.arrivals(v, &mut arr);
    Deviation {
        agent,
        strategy,
        before,
        after: CostBreakdown {
            unreached_terminals: c.unreached(&arr),
            edges_bought: before.edges_bought + 1,
        },
    }
}

fn report(
    kind: EquilibriumKind,
    s: &StrategyProfile,
    host: &HostGraph,
    witness: Option<Deviation>,
    exhausted: bool,
) -> Result<VerificationReport> {
    let verdict = match (&witness, exhausted) {
        (Some(_), _) => Verdict::Refuted,
        (None, true) => Verdict::Inconclusive,
        (None, false) => Verdict::Equilibrium,
    };
    Ok(VerificationReport {
        kind,
        setting: s.setting(),
        verdict,
        witness,
        certificates: certificates_for(s, host)?,
    })
}
