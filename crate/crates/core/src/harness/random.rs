use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{Setting, StrategyProfile};
use crate::temporal::{node, HostGraph, Label, NodeId, TemporalGraph, TimeEdge};

/// The generator used for every seeded experiment.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomHostParams {
    pub n: usize,
    pub k: usize,
    /// Labels are drawn from 1..=max_label (then normalized).
    pub max_label: Label,
    /// Each pair gets between 1 and this many distinct labels.
    pub max_labels_per_edge: usize,
}

/// A random complete host on nodes v1..vn with k random terminals.
pub fn random_host(p: RandomHostParams, rng: &mut impl Rng) -> Result<HostGraph> {
    if p.k == 0 || p.k > p.n || p.max_label == 0 || p.max_labels_per_edge == 0 {
        return Err(Error::PreconditionFailed(format!(
            "bad random host parameters {p:?}"
        )));
    }
    let nodes: Vec<NodeId> = (1..=p.n).map(|i| node(format!("v{i}"))).collect();
    let mut g = TemporalGraph::new(nodes.iter().cloned())?;
    let per_edge = p.max_labels_per_edge.min(p.max_label as usize);
    for i in 0..p.n {
        for j in i + 1..p.n {
            let count = rng.gen_range(1..=per_edge);
            for l in sample(rng, p.max_label as usize, count) {
                g.add_time_edge(&TimeEdge::new(
                    nodes[i].clone(),
                    nodes[j].clone(),
                    l as Label + 1,
                )?)?;
            }
        }
    }
    let terminals = sample(rng, p.n, p.k)
        .into_iter()
        .map(|i| nodes[i].clone())
        .collect();
    HostGraph::normalize(g, terminals).map(|(h, _)| h)
}

/// Every agent independently buys each purchasable time edge with probability `p`.
pub fn random_profile(
    host: &HostGraph,
    setting: Setting,
    p: f64,
    rng: &mut impl Rng,
) -> StrategyProfile {
    let mut s = StrategyProfile::empty(setting, host);
    for v in host.nodes() {
        for e in host.time_edges() {
            if (setting == Setting::Global || e.is_incident_to(v)) && rng.gen_bool(p) {
                s.buy(v, e.clone());
            }
        }
    }
    s
}
