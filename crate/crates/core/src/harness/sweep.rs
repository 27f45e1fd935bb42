use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{
    is_greedy_equilibrium, is_nash_equilibrium, EquilibriumKind, Setting, StrategyProfile, Verdict,
};
use crate::temporal::{is_terminal_spanner, reach_set, HostGraph, NodeId, TemporalGraph, TimeEdge};
use crate::util::for_each_combination;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    pub kind: EquilibriumKind,
    /// Drop owners that could sell the edge without losing a terminal.
    pub prefilter: bool,
    /// Refuse sweeps with more assignments than this (after the prefilter).
    pub max_assignments: u64,
    /// Per-agent search budget of the NE check.
    pub budget: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            kind: EquilibriumKind::Nash,
            prefilter: false,
            max_assignments: 50_000_000,
            budget: 1_000_000,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub setting: Setting,
    pub kind: EquilibriumKind,
    /// Number of ownership assignments before the prefilter.
    pub assignments: u64,
    /// Assignments actually verified.
    pub checked: u64,
    pub equilibria: u64,
    pub inconclusive: u64,
    /// The first equilibrium in enumeration order.
    pub first: Option<BTreeSet<(NodeId, TimeEdge)>>,
}

/// Verifies every way of assigning each time edge of `target` to one buyer:
/// an endpoint in the local setting, any agent in the global one.
///
/// With the prefilter, an agent is never made the owner of an edge whose
/// removal leaves it reaching the same terminals, since it would then have
/// an improving removal. The filter only depends on the edge and the agent,
/// so it is applied per edge before enumerating.
pub fn sweep_ownership(
    host: &HostGraph,
    target: &TemporalGraph,
    setting: Setting,
    config: SweepConfig,
) -> Result<SweepReport> {
    let edges: Vec<TimeEdge> = target.time_edges().collect();
    if let Some(e) = edges.iter().find(|e| host.edge_id(e).is_none()) {
        return Err(Error::InvalidPurchase(e.clone()));
    }
    let mut owners: Vec<Vec<NodeId>> = edges
        .iter()
        .map(|e| match setting {
            Setting::Local => vec![e.u().clone(), e.v().clone()],
            Setting::Global => host.nodes().to_vec(),
        })
        .collect();
    let product = |o: &[Vec<NodeId>]| {
        o.iter()
            .try_fold(1u64, |acc, v| acc.checked_mul(v.len() as u64))
            .unwrap_or(u64::MAX)
    };
    let assignments = product(&owners);
    if config.prefilter {
        for (e, list) in edges.iter().zip(owners.iter_mut()) {
            let mut minus = target.clone();
            minus.remove_time_edge(e);
            list.retain(|o| {
                let count = |g: &TemporalGraph| {
                    let r = reach_set(g, o).expect("owner in graph");
                    host.terminals().iter().filter(|t| r.contains(*t)).count()
                };
                count(&minus) < count(target)
            });
        }
    }
    let checked = product(&owners);
    if checked > config.max_assignments {
        return Err(Error::SearchTooLarge(format!(
            "{checked} ownership assignments exceed the limit of {}",
            config.max_assignments
        )));
    }

    let decode = |mut index: u64| {
        let mut s = StrategyProfile::empty(setting, host);
        for (e, list) in edges.iter().zip(&owners) {
            let len = list.len() as u64;
            s.buy(&list[(index % len) as usize], e.clone());
            index /= len;
        }
        s
    };
    let (equilibria, inconclusive, first) = (0..checked)
        .into_par_iter()
        .map(|i| -> Result<(u64, u64, Option<u64>)> {
            let s = decode(i);
            let verdict = match config.kind {
                EquilibriumKind::Greedy => is_greedy_equilibrium(&s, host)?.verdict,
                EquilibriumKind::Nash => {
                    if !is_greedy_equilibrium(&s, host)?.is_equilibrium() {
                        Verdict::Refuted
                    } else {
                        is_nash_equilibrium(&s, host, config.budget)?.verdict
                    }
                }
            };
            Ok(match verdict {
                Verdict::Equilibrium => (1, 0, Some(i)),
                Verdict::Inconclusive => (0, 1, None),
                Verdict::Refuted => (0, 0, None),
            })
        })
        .try_reduce(
            || (0, 0, None),
            |a, b| {
                let first = match (a.2, b.2) {
                    (Some(x), Some(y)) => Some(x.min(y)),
                    (x, y) => x.or(y),
                };
                Ok((a.0 + b.0, a.1 + b.1, first))
            },
        )?;
    let first = first.map(|i| {
        decode(i)
            .strategies()
            .flat_map(|(v, es)| es.iter().map(move |e| (v.clone(), e.clone())))
            .collect()
    });
    Ok(SweepReport {
        setting,
        kind: config.kind,
        assignments,
        checked,
        equilibria,
        inconclusive,
        first,
    })
}

/// The first equilibrium found by trying realized graphs of increasing size
/// (subsets of host time edges in canonical order, terminal spanners only) and
/// sweeping their ownerships with the prefilter. Only usable on tiny hosts.
pub fn find_equilibrium(
    host: &HostGraph,
    setting: Setting,
    config: SweepConfig,
) -> Result<Option<StrategyProfile>> {
    let all = host.time_edges();
    let base = host.graph().edgeless_like();
    let config = SweepConfig {
        prefilter: true,
        ..config
    };
    let mut result: Result<Option<StrategyProfile>> = Ok(None);
    for size in host.n().saturating_sub(1)..=all.len() {
        for_each_combination(all.len(), size, |pick| {
            let mut g = base.clone();
            for &i in pick {
                g.add_time_edge(&all[i]).expect("host edge");
            }
            match is_terminal_spanner(&g, host.terminals()) {
                Ok(false) => return true,
                Err(e) => {
                    result = Err(e);
                    return false;
                }
                Ok(true) => {}
            }
            match sweep_ownership(host, &g, setting, config) {
                Ok(report) => match report.first {
                    Some(owned) => {
                        let mut s = StrategyProfile::empty(setting, host);
                        for (v, e) in owned {
                            s.buy(&v, e);
                        }
                        result = Ok(Some(s));
                        false
                    }
                    None => true,
                },
                Err(e) => {
                    result = Err(e);
                    false
                }
            }
        });
        if !matches!(result, Ok(None)) {
            break;
        }
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::fixtures::{fig4, fig5_left, fig5_right, host};
    use crate::game::realized_graph;
    use crate::temporal::te;

    #[test]
    fn fig4_has_no_ne_owner() {
        let (h, s) = fig4();
        let g = realized_graph(&s, &h).unwrap();
        let r = sweep_ownership(&h, &g, Setting::Global, SweepConfig::default()).unwrap();
        assert_eq!(
            (r.assignments, r.checked, r.equilibria, r.inconclusive),
            (1024, 1024, 0, 0)
        );
        let ge = SweepConfig {
            kind: EquilibriumKind::Greedy,
            ..SweepConfig::default()
        };
        assert!(
            sweep_ownership(&h, &g, Setting::Global, ge)
                .unwrap()
                .equilibria
                > 0
        );
    }

    #[test]
    fn fig5_sweeps() {
        let (h, s) = fig5_left();
        let g = realized_graph(&s, &h).unwrap();
        let r = sweep_ownership(&h, &g, Setting::Local, SweepConfig::default()).unwrap();
        assert_eq!((r.assignments, r.equilibria), (32, 0));
        let r = sweep_ownership(&h, &g, Setting::Global, SweepConfig::default()).unwrap();
        assert!(r.equilibria >= 1);

        let (h, s) = fig5_right();
        let g = realized_graph(&s, &h).unwrap();
        let cfg = SweepConfig {
            prefilter: true,
            ..SweepConfig::default()
        };
        let r = sweep_ownership(&h, &g, Setting::Global, cfg).unwrap();
        assert_eq!(r.assignments, 6u64.pow(8));
        assert!(r.checked < r.assignments);
        assert_eq!(r.equilibria, 0);
        let r = sweep_ownership(&h, &g, Setting::Local, cfg).unwrap();
        assert!(r.equilibria >= 1);
    }

    #[test]
    fn oversized_sweeps_are_refused() {
        let (h, s) = fig5_right();
        let g = realized_graph(&s, &h).unwrap();
        let cfg = SweepConfig {
            max_assignments: 10,
            ..SweepConfig::default()
        };
        assert!(matches!(
            sweep_ownership(&h, &g, Setting::Global, cfg),
            Err(Error::SearchTooLarge(_))
        ));
    }

    #[test]
    fn exhaustive_search_finds_a_path_equilibrium() {
        let h = host(&["a", "b", "c"], &["a", "c"], &[te("a", "c", 2)], 1);
        let s = find_equilibrium(&h, Setting::Local, SweepConfig::default())
            .unwrap()
            .unwrap();
        assert_eq!(realized_graph(&s, &h).unwrap().time_edge_count(), 2);
        assert!(is_nash_equilibrium(&s, &h, 1_000_000)
            .unwrap()
            .is_equilibrium());
    }
}
