//! Randomized online bipartite matching on finite metric spaces.
//!
//! Servers are fixed up front; requests arrive one at a time in an order the
//! adversary chose in advance, and each must be matched to a free server
//! immediately. The randomized strategy implemented here:
//!
//! 1. restrict the metric to the distinct server points ([`metric`]),
//! 2. sample a λ-HST dominating that submetric ([`hst::frt_embed`]),
//! 3. move every request to its nearest server point ([`online::Mai`]),
//! 4. serve it with randomized weighted greedy on the tree
//!    ([`online::RwgmState`]).
//!
//! [`oracle`] provides the exact offline optimum and the harmonic and
//! turning-point envelopes the online costs are compared against;
//! [`harness`] generates adversarial families and aggregates Monte Carlo
//! competitive ratios.
//!
//! ```
//! use rwgm::harness::{generate_instance, run_pipeline, Family, GeneratorSpec};
//!
//! let inst = generate_instance(&GeneratorSpec::new(Family::Star, 8, 0)).unwrap();
//! let report = run_pipeline(&inst, 42, 200).unwrap();
//! assert!(report.mean_ratio().unwrap() >= 1.0);
//! ```

pub mod harness;
pub mod hst;
pub mod metric;
pub mod online;
pub mod oracle;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Metric(#[from] metric::MetricError),
    #[error(transparent)]
    Instance(#[from] metric::InstanceError),
    #[error(transparent)]
    Tree(#[from] hst::HstError),
    #[error(transparent)]
    Match(#[from] online::MatchError),
    #[error(transparent)]
    Oracle(#[from] oracle::OracleError),
    #[error(transparent)]
    Generator(#[from] harness::GeneratorError),
    #[error(transparent)]
    Algorithm(#[from] online::UnknownAlgorithm),
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
