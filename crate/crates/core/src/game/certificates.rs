use std::collections::BTreeMap;

use serde::Serialize;

use super::{realized_graph, Setting, StrategyProfile};
use crate::error::Result;
use crate::temporal::HostGraph;

/// An edge-count bound every equilibrium of the matching kind must satisfy.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    /// |Λ_{G(s)}|.
    pub value: usize,
    pub bound: f64,
    /// Whether `value` must stay strictly below `bound`.
    pub strict: bool,
    pub holds: bool,
}

impl Certificate {
    fn new(value: usize, bound: f64, strict: bool) -> Self {
        let v = value as f64;
        let holds = if strict { v < bound } else { v <= bound };
        Certificate {
            value,
            bound,
            strict,
            holds,
        }
    }
}

pub type Certificates = BTreeMap<&'static str, Certificate>;

/// Edge-count bounds that hold for every greedy equilibrium (and so every NE):
///
/// - `local-density`: fewer than √(6k)·n + n time edges; local setting only.
/// - `lifetime`: at most λ^max·(n−1) time edges, since a label class with n
///   edges contains a cycle whose buyers could drop an edge.
/// - `terminal-trees`: at most k·(n−1) time edges, since an edge outside a
///   fixed family of k reachability trees can be dropped by its buyer.
pub fn equilibrium_certificates(s: &StrategyProfile, host: &HostGraph) -> Result<Certificates> {
    certificates_for(s, host)
}

pub(crate) fn certificates_for(s: &StrategyProfile, host: &HostGraph) -> Result<Certificates> {
    let m = realized_graph(s, host)?.time_edge_count();
    let n = host.n();
    let k = host.k();
    let mut out = Certificates::new();
    if s.setting() == Setting::Local {
        let bound = (6.0 * k as f64).sqrt() * n as f64 + n as f64;
        out.insert("local-density", Certificate::new(m, bound, true));
    }
    let tree = n.saturating_sub(1) as f64;
    out.insert(
        "lifetime",
        Certificate::new(m, host.lifetime() as f64 * tree, false),
    );
    out.insert(
        "terminal-trees",
        Certificate::new(m, k as f64 * tree, false),
    );
    Ok(out)
}
