//! Instance families, the end-to-end pipeline, and Monte Carlo reporting.

pub mod generators;
pub mod pipeline;
pub mod stats;
pub mod sweep;

pub use generators::{generate_instance, Family, GeneratorError, GeneratorSpec};
pub use pipeline::{
    episode_rng, greedy_trace, optimal_trace, run_algorithm, run_pipeline, run_pipeline_with, PipelineEpisode,
    PipelineOptions, Prepared, RunOutput, DEFAULT_EPISODES,
};
pub use stats::{RatioReport, Summary};
pub use sweep::{instance_seed, sweep, sweep_family, write_sweep_csv, SweepRow};
