use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use super::{assemble, complete_graph};
use crate::error::{Error, Result};
use crate::game::{Setting, StrategyProfile};
use crate::temporal::{
    is_terminal_spanner, node, HostGraph, Label, NodeId, TemporalGraph, TimeEdge,
};

/// A node of the dense cycle graph: v_{bag,index} if `odd`, else v'_{bag,index}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DenseCycleNode {
    pub bag: usize,
    pub index: usize,
    pub odd: bool,
}

impl DenseCycleNode {
    pub fn odd(bag: usize, index: usize) -> Self {
        DenseCycleNode {
            bag,
            index,
            odd: true,
        }
    }

    pub fn even(bag: usize, index: usize) -> Self {
        DenseCycleNode {
            bag,
            index,
            odd: false,
        }
    }

    pub fn id(&self) -> NodeId {
        node(self.to_string())
    }
}

impl fmt::Display for DenseCycleNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prime = if self.odd { "" } else { "'" };
        write!(f, "v{prime}{}.{}", self.bag, self.index)
    }
}

/// Layout of the dense cycle graph for one even x: 2x bags of x nodes each.
struct Layout {
    x: usize,
    nodes: Vec<DenseCycleNode>,
    /// Cross-bag edges of G, each listed once.
    cross: Vec<(DenseCycleNode, DenseCycleNode, Label)>,
}

impl Layout {
    fn new(x: usize) -> Result<Self> {
        if x == 0 || x % 2 == 1 {
            return Err(Error::PreconditionFailed(format!(
                "x must be even and positive, got {x}"
            )));
        }
        let (bags, half) = (2 * x, x / 2);
        let nodes = (0..bags)
            .flat_map(|i| {
                (0..half).flat_map(move |j| [DenseCycleNode::odd(i, j), DenseCycleNode::even(i, j)])
            })
            .collect();
        let label = |d: i64| (d.rem_euclid(x as i64) + 1) as Label;
        let mut cross = Vec::with_capacity(x * x * x);
        for i in 0..bags {
            let next = (i + 1) % bags;
            for j in 0..half {
                for k in 0..half {
                    let d = 2 * (k as i64 - j as i64);
                    cross.push((
                        DenseCycleNode::odd(i, j),
                        DenseCycleNode::even(next, k),
                        label(d),
                    ));
                    cross.push((
                        DenseCycleNode::even(i, j),
                        DenseCycleNode::odd(next, k),
                        label(d + 1),
                    ));
                }
            }
        }
        Ok(Layout { x, nodes, cross })
    }

    fn bags(&self) -> usize {
        2 * self.x
    }

    /// v_{i,0}, v'_{i,0}, v_{i,1}, …, v'_{i,x/2−1}.
    fn bag_order(&self, i: usize) -> Vec<DenseCycleNode> {
        (0..self.x / 2)
            .flat_map(|j| [DenseCycleNode::odd(i, j), DenseCycleNode::even(i, j)])
            .collect()
    }

    fn bag_path(&self, i: usize) -> Vec<TimeEdge> {
        self.bag_order(i)
            .windows(2)
            .map(|w| time_edge(w[0], w[1], self.x as Label + 1))
            .collect()
    }

    fn graph(&self) -> Result<TemporalGraph> {
        TemporalGraph::with_edges(
            self.nodes.iter().map(|v| v.id()),
            self.cross.iter().map(|&(a, b, l)| time_edge(a, b, l)),
        )
    }

    fn connected_graph(&self) -> Result<TemporalGraph> {
        let mut g = self.graph()?;
        for i in 0..self.bags() {
            for e in self.bag_path(i) {
                g.add_time_edge(&e)?;
            }
        }
        Ok(g)
    }

    /// P_{i,j}: from v_{i,j}, follow the edge labelled l into the next bag for l = 1..=x.
    fn forward_path(&self, start: DenseCycleNode) -> Vec<TimeEdge> {
        let forward: HashMap<(DenseCycleNode, Label), DenseCycleNode> =
            self.cross.iter().map(|&(a, b, l)| ((a, l), b)).collect();
        let mut cur = start;
        (1..=self.x as Label)
            .map(|l| {
                let next = forward[&(cur, l)];
                let e = time_edge(cur, next, l);
                cur = next;
                e
            })
            .collect()
    }
}

fn time_edge(a: DenseCycleNode, b: DenseCycleNode, label: Label) -> TimeEdge {
    TimeEdge::new(a.id(), b.id(), label).expect("distinct nodes")
}

/// The lower-bound instance: G, its connected version G′, the complete host
/// that labels every pair outside G′ with x+2, and the global NE realizing G′.
#[derive(Clone, Debug)]
pub struct DenseCycleInstance {
    pub x: usize,
    pub host: HostGraph,
    pub profile: StrategyProfile,
    /// The dense cycle graph: x³ edges between neighbouring bags.
    pub g: TemporalGraph,
    /// G plus a label-(x+1) path inside every bag.
    pub g_prime: TemporalGraph,
}

/// Builds the dense cycle instance for an even x ≥ 2.
///
/// Bag i holds v_{i,j} and v'_{i,j} for j < x/2. The edge {v_{i,j}, v'_{i+1,k}}
/// has label (2(k−j) mod x)+1 and {v'_{i,j}, v_{i+1,k}} has label
/// ((2(k−j)+1) mod x)+1. Each v_{i,j} buys its forward path P_{i,j} with labels
/// 1..x, each v'_{i,0} buys the bag path of the opposite bag, and all other
/// agents buy nothing. Every node is a terminal.
pub fn dense_cycle_instance(x: usize) -> Result<DenseCycleInstance> {
    let layout = Layout::new(x)?;
    let g = layout.graph()?;
    let g_prime = layout.connected_graph()?;
    let ids: Vec<NodeId> = layout.nodes.iter().map(|v| v.id()).collect();
    let far = x as Label + 2;
    let raw = complete_graph(&ids, |i, j| {
        g_prime
            .labels(&ids[i], &ids[j])
            .cloned()
            .unwrap_or_else(|| BTreeSet::from([far]))
    })?;
    let strategies: Vec<(NodeId, Vec<TimeEdge>)> = layout
        .nodes
        .iter()
        .map(|&v| {
            let buys = match (v.odd, v.index) {
                (true, _) => layout.forward_path(v),
                (false, 0) => layout.bag_path((v.bag + x) % layout.bags()),
                (false, _) => Vec::new(),
            };
            (v.id(), buys)
        })
        .collect();
    let terminals = ids.iter().cloned().collect();
    let (host, profile) = assemble(raw, terminals, Setting::Global, strategies)?;
    Ok(DenseCycleInstance {
        x,
        host,
        profile,
        g,
        g_prime,
    })
}

/// Outcome of [`dense_cycle_lemma_checks`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DenseCycleReport {
    pub x: usize,
    pub nodes: usize,
    pub g_edges: usize,
    pub g_prime_edges: usize,
    /// Each node has exactly one incident edge per label 1..=x; odd labels lead
    /// to the next bag from v nodes and to the previous bag from v' nodes.
    pub incident_labels: bool,
    /// From each v_{i,j} exactly one temporal path of G ends in bag i+x (and it
    /// is P_{i,j}) and exactly one ends in bag i+x+1.
    pub unique_paths: bool,
    /// The paths P_{i,j} cover every edge of G exactly once.
    pub partition: bool,
    /// Every node of G′ reaches every other node.
    pub connected: bool,
}

impl DenseCycleReport {
    pub fn all_pass(&self) -> bool {
        self.incident_labels && self.unique_paths && self.partition && self.connected
    }
}

/// Checks the structural facts behind the dense cycle equilibrium by direct
/// enumeration on G.
pub fn dense_cycle_lemma_checks(x: usize) -> Result<DenseCycleReport> {
    let layout = Layout::new(x)?;
    let g = layout.graph()?;
    let g_prime = layout.connected_graph()?;
    let bags = layout.bags();
    let pos: HashMap<DenseCycleNode, usize> = layout
        .nodes
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i))
        .collect();
    let mut adj: Vec<Vec<(usize, Label)>> = vec![Vec::new(); layout.nodes.len()];
    for &(a, b, l) in &layout.cross {
        adj[pos[&a]].push((pos[&b], l));
        adj[pos[&b]].push((pos[&a], l));
    }

    let incident_labels = layout.nodes.iter().all(|v| {
        let mut seen: Vec<Label> = adj[pos[v]].iter().map(|&(_, l)| l).collect();
        seen.sort_unstable();
        let complete = seen == (1..=x as Label).collect::<Vec<_>>();
        let directed = adj[pos[v]].iter().all(|&(w, l)| {
            let forward = (l % 2 == 1) == v.odd;
            let expected = if forward {
                (v.bag + 1) % bags
            } else {
                (v.bag + bags - 1) % bags
            };
            layout.nodes[w].bag == expected
        });
        complete && directed
    });

    let mut unique_paths = true;
    let mut cover: Vec<TimeEdge> = Vec::new();
    for &v in layout.nodes.iter().filter(|v| v.odd) {
        let opposite = (v.bag + x) % bags;
        let beyond = (v.bag + x + 1) % bags;
        let mut hits: HashMap<usize, Vec<Vec<Step>>> = HashMap::new();
        let mut stack = Vec::new();
        enumerate_paths(&adj, pos[&v], 0, &mut stack, &mut |path| {
            let end = path.last().expect("nonempty").1;
            let bag = layout.nodes[end].bag;
            if bag == opposite || bag == beyond {
                hits.entry(bag).or_default().push(path.to_vec());
            }
        });
        let p = layout.forward_path(v);
        let found_p = hits.get(&opposite).map(|ps| {
            ps.len() == 1
                && ps[0]
                    .iter()
                    .map(|&(a, b, l)| time_edge(layout.nodes[a], layout.nodes[b], l))
                    .eq(p.iter().cloned())
        });
        let found_q = hits.get(&beyond).map(|ps| ps.len() == 1);
        unique_paths &= found_p == Some(true) && found_q == Some(true);
        cover.extend(p);
    }
    let covered: BTreeSet<TimeEdge> = cover.iter().cloned().collect();
    let all: BTreeSet<TimeEdge> = g.time_edges().collect();
    let partition = cover.len() == all.len() && covered == all;

    let everyone: BTreeSet<NodeId> = g_prime.nodes().iter().cloned().collect();
    let connected = is_terminal_spanner(&g_prime, &everyone)?;

    Ok(DenseCycleReport {
        x,
        nodes: layout.nodes.len(),
        g_edges: g.time_edge_count(),
        g_prime_edges: g_prime.time_edge_count(),
        incident_labels,
        unique_paths,
        partition,
        connected,
    })
}

/// Calls `visit` on every nonempty path from `at` with strictly increasing labels.
/// One hop of an enumerated path: (from, to, label) as node positions.
type Step = (usize, usize, Label);

fn enumerate_paths(
    adj: &[Vec<(usize, Label)>],
    at: usize,
    last: Label,
    stack: &mut Vec<Step>,
    visit: &mut impl FnMut(&[Step]),
) {
    for &(w, l) in &adj[at] {
        if l > last {
            stack.push((at, w, l));
            visit(stack);
            enumerate_paths(adj, w, l, stack, visit);
            stack.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{is_nash_equilibrium, realized_graph};
    use crate::temporal::earliest_arrivals;

    #[test]
    fn counts() {
        for x in [2, 4, 6] {
            let d = dense_cycle_instance(x).unwrap();
            assert_eq!(d.host.n(), 2 * x * x);
            assert_eq!(d.g.time_edge_count(), x * x * x);
            assert_eq!(d.g_prime.time_edge_count(), x * x * x + 2 * x * (x - 1));
            assert_eq!(realized_graph(&d.profile, &d.host).unwrap(), d.g_prime);
            assert!(d.profile.is_pairwise_disjoint());
        }
    }

    #[test]
    fn bad_parameters() {
        for x in [0, 1, 3] {
            assert!(matches!(
                dense_cycle_instance(x),
                Err(Error::PreconditionFailed(_))
            ));
        }
    }

    #[test]
    fn x2_path_and_arrival() {
        let d = dense_cycle_instance(2).unwrap();
        let src = DenseCycleNode::odd(0, 0).id();
        let dst = DenseCycleNode::odd(2, 0).id();
        let a = earliest_arrivals(&d.g, &src).unwrap();
        assert_eq!(a.arrival(&dst), Some(2));
        let path = a.path_to(&dst).unwrap();
        let mid = DenseCycleNode::even(1, 0);
        assert_eq!(
            path,
            vec![
                time_edge(DenseCycleNode::odd(0, 0), mid, 1),
                time_edge(mid, DenseCycleNode::odd(2, 0), 2)
            ]
        );
    }

    #[test]
    fn g_alone_is_not_connected() {
        let d = dense_cycle_instance(2).unwrap();
        let all = d.g.nodes().iter().cloned().collect();
        assert!(!is_terminal_spanner(&d.g, &all).unwrap());
    }

    #[test]
    fn lemma_checks_pass() {
        for x in [2, 4, 6] {
            let r = dense_cycle_lemma_checks(x).unwrap();
            assert!(r.all_pass(), "{r:?}");
        }
    }

    #[test]
    fn x2_is_a_global_ne() {
        let d = dense_cycle_instance(2).unwrap();
        let r = is_nash_equilibrium(&d.profile, &d.host, 10_000_000).unwrap();
        assert!(r.is_equilibrium(), "{:?}", r.witness);
    }
}
