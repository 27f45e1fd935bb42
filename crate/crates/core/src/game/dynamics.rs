use super::response::greedy_move;
use super::{is_greedy_equilibrium, Compiled, StrategyProfile};
use crate::error::{Error, Result};
use crate::temporal::HostGraph;

#[derive(Clone, Debug)]
pub struct DynamicsOutcome {
    pub profile: StrategyProfile,
    /// A full round passed without a move.
    pub converged: bool,
    pub rounds: usize,
    pub moves: usize,
}

/// Round-robin greedy best responses in node order. Each agent in turn makes
/// its best single add or remove; the process stops after a silent round or
/// after `max_rounds` rounds.
pub fn greedy_dynamics(
    s0: &StrategyProfile,
    host: &HostGraph,
    max_rounds: usize,
) -> Result<DynamicsOutcome> {
    s0.validate(host)?;
    let mut s = s0.clone();
    let mut moves = 0;
    for round in 1..=max_rounds {
        let mut moved = false;
        for v in 0..host.n() {
            let c = Compiled::new(&s, host)?;
            if let Some((m, _)) = greedy_move(&c, v, true) {
                let agent = host.nodes()[v].clone();
                m.apply(&agent, &mut s);
                moved = true;
                moves += 1;
            }
        }
        if !moved {
            if !is_greedy_equilibrium(&s, host)?.is_equilibrium() {
                return Err(Error::PreconditionFailed(
                    "silent round ended on a profile that is not a GE".into(),
                ));
            }
            return Ok(DynamicsOutcome {
                profile: s,
                converged: true,
                rounds: round,
                moves,
            });
        }
    }
    Ok(DynamicsOutcome {
        profile: s,
        converged: false,
        rounds: max_rounds,
        moves,
    })
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::{realized_graph, Setting};
    use super::*;
    use crate::temporal::{is_terminal_spanner, TimeEdge};

    #[test]
    fn equilibrium_is_a_fixed_point() {
        let (h, s) = fig5_left();
        let out = greedy_dynamics(&s, &h, 10).unwrap();
        assert!(out.converged);
        assert_eq!(out.rounds, 1);
        assert_eq!(out.profile, s);
    }

    #[test]
    fn direct_edges_prune_down_to_a_ge() {
        let (h, _) = fig5_right();
        let mut s = StrategyProfile::empty(Setting::Local, &h);
        for v in h.nodes() {
            for t in h.terminals() {
                if v != t {
                    let l = h.min_label(v, t).unwrap();
                    s.buy(v, TimeEdge::new(v.clone(), t.clone(), l).unwrap());
                }
            }
        }
        let out = greedy_dynamics(&s, &h, 100).unwrap();
        assert!(out.converged);
        let g = realized_graph(&out.profile, &h).unwrap();
        assert!(is_terminal_spanner(&g, h.terminals()).unwrap());
    }

    #[test]
    fn empty_start_reaches_ge() {
        let (h, _) = fig4();
        let s = StrategyProfile::empty(Setting::Global, &h);
        let out = greedy_dynamics(&s, &h, 100).unwrap();
        assert!(out.converged);
        assert!(is_greedy_equilibrium(&out.profile, &h)
            .unwrap()
            .is_equilibrium());
    }
}
