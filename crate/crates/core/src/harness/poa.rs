use serde::Serialize;

use super::Instance;
use crate::error::{Error, Result};
use crate::game::{
    is_greedy_equilibrium, is_nash_equilibrium, realized_graph, EquilibriumKind, Setting,
};
use crate::spanner::{min_terminal_spanner, prune_to_minimal, SpannerSearchConfig};
use crate::temporal::{HostGraph, TemporalGraph};

/// Size of a minimum terminal spanner, exact or as an interval.
#[derive(Clone, Debug)]
pub struct Optimum {
    pub lower: usize,
    pub upper: usize,
    /// A spanner with `upper` time edges.
    pub witness: TemporalGraph,
}

impl Optimum {
    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }
}

/// The exact optimum when the search fits `config`; otherwise n−1 as the
/// lower bound and the pruned host as the upper bound.
pub fn optimum(host: &HostGraph, config: SpannerSearchConfig) -> Result<Optimum> {
    let lower = host.n().saturating_sub(1);
    match min_terminal_spanner(host, config) {
        Ok(g) => Ok(Optimum {
            lower: g.time_edge_count(),
            upper: g.time_edge_count(),
            witness: g,
        }),
        Err(Error::SearchTooLarge(_)) => {
            let g = prune_to_minimal(host.graph(), host.terminals())?;
            Ok(Optimum {
                lower,
                upper: g.time_edge_count(),
                witness: g,
            })
        }
        Err(e) => Err(e),
    }
}

/// One row of the PoA table. Columns are documented on the fields; bound-based
/// optima have `optimum_exact = false` and a ratio interval.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PoARecord {
    pub name: String,
    pub n: usize,
    pub k: usize,
    pub lifetime: u32,
    pub kind: EquilibriumKind,
    pub setting: Setting,
    /// |Λ_{G(s)}| of the verified equilibrium.
    pub equilibrium_edges: usize,
    pub optimum_min: usize,
    pub optimum_max: usize,
    pub optimum_exact: bool,
    /// equilibrium_edges / optimum_max.
    pub ratio_min: f64,
    /// equilibrium_edges / optimum_min.
    pub ratio_max: f64,
}

pub const POA_COLUMNS: [&str; 12] = [
    "name",
    "n",
    "k",
    "lifetime",
    "kind",
    "setting",
    "equilibrium_edges",
    "optimum_min",
    "optimum_max",
    "optimum_exact",
    "ratio_min",
    "ratio_max",
];

/// Verifies the instance's profile and returns its record, or `None` if the
/// profile is missing or not a verified equilibrium of `kind`.
pub fn poa_record(
    inst: &Instance,
    kind: EquilibriumKind,
    budget: u64,
    config: SpannerSearchConfig,
) -> Result<Option<PoARecord>> {
    let Some(s) = &inst.profile else {
        return Ok(None);
    };
    let host = &inst.host;
    let report = match kind {
        EquilibriumKind::Nash => is_nash_equilibrium(s, host, budget)?,
        EquilibriumKind::Greedy => is_greedy_equilibrium(s, host)?,
    };
    if !report.is_equilibrium() {
        return Ok(None);
    }
    let m = realized_graph(s, host)?.time_edge_count();
    let opt = optimum(host, config)?;
    // A verified equilibrium is itself a terminal spanner.
    let upper = opt.upper.min(m);
    let lower = opt.lower;
    let ratio = |num: usize, den: usize| {
        if den == 0 {
            1.0
        } else {
            num as f64 / den as f64
        }
    };
    Ok(Some(PoARecord {
        name: inst.name().to_string(),
        n: host.n(),
        k: host.k(),
        lifetime: host.lifetime(),
        kind,
        setting: s.setting(),
        equilibrium_edges: m,
        optimum_min: lower,
        optimum_max: upper,
        optimum_exact: lower == upper,
        ratio_min: ratio(m, upper),
        ratio_max: ratio(m, lower),
    }))
}
