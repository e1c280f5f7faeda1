//! Offline quantities: the exact optimum, harmonic numbers, and the
//! turning-point decomposition of matching costs on an HST together with
//! the expected-cost envelopes derived from it.

mod assignment;
mod harmonic;
mod turning;

use thiserror::Error;

pub use assignment::{min_cost_assignment, optimal_matching, OptimalMatching};
pub use harmonic::{harmonic, uniform_bound};
pub use turning::{
    bound_rwgm_hst, expected_moves_bound, hst_cost_from_tau, turning_point_tau, BoundParams, TurningPointProfile,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("{servers} servers but {requests} requests")]
    SizeMismatch { servers: usize, requests: usize },
    #[error("cost matrix is not square")]
    NotSquare,
    #[error("deficiency {delta} exceeds server count {q}")]
    DeltaTooLarge { q: i64, delta: i64 },
    #[error("deficiency must be nonnegative, got {0}")]
    NegativeDelta(i64),
    #[error("node {0} is not a leaf")]
    NotALeaf(usize),
}
