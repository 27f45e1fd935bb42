//! The k-terminal temporal network creation game.
//!
//! Agents sit on the nodes of a complete temporal host graph and buy time
//! edges; each agent wants to temporally reach every terminal while buying as
//! few edges as possible. The crate covers reachability, equilibrium
//! verification in the local and global edge-buying settings, the known
//! equilibrium constructions, exact social optima and an experiment harness.

pub mod constructions;
pub mod error;
pub mod game;
pub mod harness;
pub mod spanner;
pub mod temporal;
mod util;

pub use constructions::{
    dense_cycle_instance, dense_cycle_lemma_checks, extend_with_nonterminal, extend_with_terminal,
    graph_product, hypercube_equilibrium, lifetime2_tree_ne, scale_with_nonterminals,
    two_terminal_ne,
};
pub use error::{Error, Result};
pub use game::{
    agent_cost, equilibrium_certificates, find_forbidden_structure, find_improving_response,
    greedy_dynamics, greedy_improving_response, is_greedy_equilibrium, is_nash_equilibrium,
    necessary_terminals, realized_graph, social_cost, CostBreakdown, Deviation, EquilibriumKind,
    GreedyMove, SearchLimits, SearchOutcome, Setting, StrategyProfile, Verdict, VerificationReport,
};
pub use spanner::{
    ge_from_minimal_spanner, min_terminal_spanner, prune_to_minimal, SpannerSearchConfig,
};
pub use temporal::{
    earliest_arrivals, is_minimal_terminal_spanner, is_terminal_spanner, node, reach_set,
    removable_time_edges, te, validate_and_normalize_host, Arrival, ArrivalMap, HostGraph, Label,
    LabelMap, Minimality, NodeId, TemporalGraph, TimeEdge,
};
