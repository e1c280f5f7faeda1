//! Online matching algorithms.
//!
//! [`RwgmState`] plays the randomized greedy game on the leaves of an HST.
//! [`Mai`] lifts any matcher that only handles requests at server points to
//! arbitrary requests by first moving each request to its nearest server
//! point. [`Greedy`] is the deterministic nearest-free-server baseline.

mod greedy;
mod mai;
mod rwgm;
mod trace;

use thiserror::Error;

use crate::hst::{HstError, NodeId};

pub use greedy::Greedy;
pub use mai::{discretize_request, Mai, MaiDecision};
pub use rwgm::{Assignment, RwgmState, SelectionPolicy, TreeMatcher};
pub use trace::{write_trace_csv, Algorithm, Decision, MatchingTrace, UnknownAlgorithm};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatchError {
    #[error(transparent)]
    Tree(#[from] HstError),
    #[error("all servers are already matched")]
    Exhausted,
    #[error("the instance has no servers")]
    NoServers,
    #[error("node {0} is not green")]
    NotGreen(NodeId),
    #[error("point {0} is not a server point of the tree")]
    NotAServerPoint(usize),
    #[error("point {0} is outside the metric")]
    UnknownPoint(usize),
}

/// What a matcher decided for one request.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Served {
    /// Server point used, in the instance metric's indices.
    pub server: usize,
    /// Cost as the matcher itself measures it (tree distance for RWGM,
    /// metric distance for greedy).
    pub cost: f64,
}

/// An online algorithm that receives requests one at a time.
pub trait OnlineMatcher {
    fn serve(&mut self, request: usize) -> Result<Served, MatchError>;
}
