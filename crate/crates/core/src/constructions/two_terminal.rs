use std::cmp::Reverse;

use crate::error::{Error, Result};
use crate::game::{
    find_improving_response, is_nash_equilibrium, SearchLimits, SearchOutcome, Setting,
    StrategyProfile, Verdict,
};
use crate::temporal::{HostGraph, NodeId, TimeEdge};

/// A Nash equilibrium with at most n time edges for a host with two terminals.
///
/// Non-terminals v are split into M (min λ(t1,v) ≤ min λ(v,t2)) and N (the
/// rest), where t1 is swapped with t2 if only N would be nonempty. With both
/// sides present the terminals are joined by a ring t1–m1–t2–n1–t1 through the
/// latest nodes of each side and every other node buys its edge to the nearer
/// terminal. Otherwise everyone buys its edge to t1, and a hub m whose edge to
/// t1 comes after min λ(t1,t2) also buys its edge to t2, handing the hub role
/// on whenever it can replace both edges by a single one.
///
/// Equal labels can make one of these edges redundant, so the profile is then
/// verified in both settings and any witnessed deviation is applied, at most
/// 2n times. All bought edges are incident to their buyer; the returned
/// profile uses the local setting.
pub fn two_terminal_ne(host: &HostGraph) -> Result<StrategyProfile> {
    if host.k() != 2 {
        return Err(Error::PreconditionFailed(format!(
            "expected two terminals, found {}",
            host.k()
        )));
    }
    let mut ts = host.terminals().iter().cloned();
    let (mut t1, mut t2) = (ts.next().expect("two"), ts.next().expect("two"));
    let min = |a: &NodeId, b: &NodeId| host.min_label(a, b).expect("complete host");
    let edge =
        |a: &NodeId, b: &NodeId| TimeEdge::new(a.clone(), b.clone(), min(a, b)).expect("distinct");
    let others: Vec<NodeId> = host
        .nodes()
        .iter()
        .filter(|v| !host.is_terminal(v))
        .cloned()
        .collect();
    let split = |t1: &NodeId, t2: &NodeId| -> (Vec<NodeId>, Vec<NodeId>) {
        others
            .iter()
            .cloned()
            .partition(|v| min(t1, v) <= min(v, t2))
    };
    let (mut m, mut n) = split(&t1, &t2);
    if m.is_empty() && !n.is_empty() {
        std::mem::swap(&mut t1, &mut t2);
        (m, n) = split(&t1, &t2);
    }
    // Stable sorts keep node order among equal labels.
    m.sort_by_key(|v| Reverse(min(&t1, v)));
    n.sort_by_key(|v| Reverse(min(v, &t2)));

    let mut s = StrategyProfile::empty(Setting::Local, host);
    if let (Some(m1), Some(n1)) = (m.first(), n.first()) {
        s.buy(&t1, edge(&t1, m1));
        s.buy(m1, edge(m1, &t2));
        s.buy(&t2, edge(&t2, n1));
        s.buy(n1, edge(n1, &t1));
        for v in &m[1..] {
            s.buy(v, edge(v, &t1));
        }
        for v in &n[1..] {
            s.buy(v, edge(v, &t2));
        }
    } else {
        s.buy(&t2, edge(&t2, &t1));
        for v in &m {
            s.buy(v, edge(v, &t1));
        }
        let direct = min(&t1, &t2);
        for hub in &m {
            if min(hub, &t1) <= direct {
                break;
            }
            s.buy(hub, edge(hub, &t2));
            let limits = SearchLimits {
                cap: Some(1),
                ..SearchLimits::default()
            };
            match find_improving_response(hub, &s, host, limits)? {
                SearchOutcome::Improving(d) => s.set_strategy(hub.clone(), d.strategy),
                _ => break,
            }
        }
    }
    repair(host, s)
}

fn repair(host: &HostGraph, mut s: StrategyProfile) -> Result<StrategyProfile> {
    let budget = SearchLimits::default().budget;
    for _ in 0..2 * host.n() {
        let mut changed = false;
        for setting in [Setting::Local, Setting::Global] {
            let r = is_nash_equilibrium(&s.clone().with_setting(setting), host, budget)?;
            match r.verdict {
                Verdict::Equilibrium => continue,
                Verdict::Inconclusive => {
                    return Err(Error::SearchTooLarge("two-terminal verification".into()))
                }
                Verdict::Refuted => {
                    let d = r.witness.expect("refutation has a witness");
                    s.set_strategy(d.agent, d.strategy);
                    s.validate(host)?;
                    changed = true;
                    break;
                }
            }
        }
        if !changed {
            return Ok(s);
        }
    }
    Err(Error::PreconditionFailed(
        "two-terminal repair did not reach an equilibrium".into(),
    ))
}
