use crate::temporal::{NodeId, TimeEdge};

/// Errors raised by graph construction, game evaluation and the search routines.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid node id {0:?}: {1}")]
    InvalidNodeId(String, &'static str),
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("invalid time edge: {0}")]
    InvalidTimeEdge(String),
    #[error("host graph is missing edge {0}|{1}")]
    IncompleteHost(NodeId, NodeId),
    #[error("host graph has no terminals")]
    NoTerminals,
    #[error("time edge {0} is not available in the host graph")]
    InvalidPurchase(TimeEdge),
    #[error("agent {agent} may only buy incident time edges, got {edge}")]
    NotIncident { agent: NodeId, edge: TimeEdge },
    #[error("agent {agent} does not buy {edge}")]
    NotOwned { agent: NodeId, edge: TimeEdge },
    #[error("graph is not a terminal spanner")]
    NotASpanner,
    #[error("spanner is not inclusion-minimal: {0} can be removed")]
    NotMinimal(TimeEdge),
    #[error("realized graph is not simple")]
    NotSimple,
    #[error("strategy profiles use different edge-buying settings")]
    SettingMismatch,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("search space too large: {0}")]
    SearchTooLarge(String),
    #[error("instance format: {0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
