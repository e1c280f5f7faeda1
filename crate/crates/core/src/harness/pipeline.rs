//! End-to-end episodes: discretize requests onto server points, sample a
//! λ-HST over the server submetric, and let RWGM choose servers on it.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::stats::RatioReport;
use crate::hst::{frt_embed, lambda_for_n, EmbeddingParams};
use crate::metric::{FiniteMetric, Instance, PointMapping};
use crate::online::{
    Algorithm, Decision, Greedy, Mai, MaiDecision, MatchingTrace, OnlineMatcher, SelectionPolicy, TreeMatcher,
};
use crate::oracle::optimal_matching;
use crate::Error;

/// Default number of episodes for randomized algorithms.
pub const DEFAULT_EPISODES: usize = 1000;

/// Random stream of one episode: ChaCha8 keyed by `master_seed`, on stream
/// number `episode`. Distinct episodes never share randomness, and the
/// sequence is the same on every platform.
pub fn episode_rng(master_seed: u64, episode: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(episode);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PipelineOptions {
    /// Overrides `lambda_for_n(n)`.
    pub lambda: Option<f64>,
    pub policy: SelectionPolicy,
}

/// Everything recorded for one pipeline episode.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineEpisode {
    pub trace: MatchingTrace,
    pub decisions: Vec<MaiDecision>,
    /// Requests the tree matcher served away from their own leaf.
    pub moves: u64,
    /// Total tree-distance cost paid by RWGM on the discretized requests.
    pub tree_cost: f64,
}

/// Per-instance data shared by all episodes.
#[derive(Debug, Clone)]
pub struct Prepared<'a> {
    inst: &'a Instance,
    sub: FiniteMetric,
    mapping: PointMapping,
    lambda: f64,
    options: PipelineOptions,
}

impl<'a> Prepared<'a> {
    pub fn new(inst: &'a Instance, options: PipelineOptions) -> Result<Self, Error> {
        let (sub, mapping) = inst.submetric_of_servers()?;
        let lambda = match options.lambda {
            Some(l) => l,
            None => lambda_for_n(inst.size())?,
        };
        Ok(Self {
            inst,
            sub,
            mapping,
            lambda,
            options,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn episode(&self, master_seed: u64, episode: u64) -> Result<PipelineEpisode, Error> {
        let mut rng = episode_rng(master_seed, episode);
        let embed_seed = rng.next_u64();
        let tree = frt_embed(&self.sub, EmbeddingParams::new(self.lambda, embed_seed)?)?
            .attach_servers(self.inst, &self.mapping)?;
        let matcher = TreeMatcher::new(&tree, &self.mapping, self.inst.servers(), rng, self.options.policy)?;
        let mut mai = Mai::new(self.inst, matcher);
        let mut decisions = Vec::with_capacity(self.inst.size());
        let mut moves = 0;
        let mut tree_cost = 0.0;
        for &r in self.inst.requests() {
            let d = mai.serve(r)?;
            debug_assert!(d.satisfies_triangle_bound(), "triangle bound broken: {d:?}");
            debug_assert!(
                d.inner_metric_cost <= d.inner_cost * (1.0 + 1e-12),
                "tree does not dominate: {d:?}"
            );
            let a = mai.inner().last_assignment().expect("just served");
            moves += u64::from(a.meet.is_some());
            tree_cost += a.cost;
            decisions.push(d);
        }
        let algorithm = match self.options.policy {
            SelectionPolicy::Uniform => Algorithm::Rwgm,
            SelectionPolicy::Proportional => Algorithm::RwgmProportional,
        };
        let trace = MatchingTrace::new(
            algorithm,
            master_seed,
            episode,
            decisions
                .iter()
                .map(|d| Decision {
                    request: d.request,
                    server: d.server,
                    cost: d.cost,
                })
                .collect(),
        );
        Ok(PipelineEpisode {
            trace,
            decisions,
            moves,
            tree_cost,
        })
    }

    /// Episodes `0..episodes`, computed in parallel and returned in order.
    pub fn episodes(&self, master_seed: u64, episodes: usize) -> Result<Vec<PipelineEpisode>, Error> {
        (0..episodes as u64)
            .into_par_iter()
            .map(|e| self.episode(master_seed, e))
            .collect()
    }
}

/// Runs the randomized pipeline for `episodes` episodes and reports cost
/// ratios against the exact optimum. A fresh tree is sampled per episode.
pub fn run_pipeline(inst: &Instance, master_seed: u64, episodes: usize) -> Result<RatioReport, Error> {
    run_pipeline_with(inst, master_seed, episodes, PipelineOptions::default()).map(|(r, _)| r)
}

pub fn run_pipeline_with(
    inst: &Instance,
    master_seed: u64,
    episodes: usize,
    options: PipelineOptions,
) -> Result<(RatioReport, Vec<PipelineEpisode>), Error> {
    if episodes == 0 {
        return Err(Error::Config("episode count must be at least 1".into()));
    }
    let prepared = Prepared::new(inst, options)?;
    let runs = prepared.episodes(master_seed, episodes)?;
    let opt = optimal_matching(inst)?.cost;
    let costs: Vec<f64> = runs.iter().map(|e| e.trace.total_cost).collect();
    let algorithm = runs[0].trace.algorithm;
    Ok((RatioReport::from_costs(algorithm, master_seed, opt, &costs), runs))
}

/// Greedy's single deterministic episode.
pub fn greedy_trace(inst: &Instance, master_seed: u64) -> Result<MatchingTrace, Error> {
    let mut g = Greedy::new(inst);
    let decisions = inst
        .requests()
        .iter()
        .map(|&r| {
            g.serve(r).map(|s| Decision {
                request: r,
                server: s.server,
                cost: s.cost,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MatchingTrace::new(Algorithm::Greedy, master_seed, 0, decisions))
}

/// The offline optimum as a trace, in request order.
pub fn optimal_trace(inst: &Instance, master_seed: u64) -> Result<MatchingTrace, Error> {
    let opt = optimal_matching(inst)?;
    let metric = inst.metric();
    let decisions = opt
        .pairs
        .iter()
        .map(|&(s, r)| {
            let (sp, rp) = (inst.servers()[s], inst.requests()[r]);
            Decision {
                request: rp,
                server: sp,
                cost: metric.distance(rp, sp),
            }
        })
        .collect();
    Ok(MatchingTrace::new(Algorithm::Optimal, master_seed, 0, decisions))
}

/// Report plus the traces it was computed from.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub report: RatioReport,
    pub traces: Vec<MatchingTrace>,
}

/// Runs one algorithm. Deterministic algorithms run a single episode
/// regardless of `episodes`.
pub fn run_algorithm(
    inst: &Instance,
    algorithm: Algorithm,
    master_seed: u64,
    episodes: usize,
) -> Result<RunOutput, Error> {
    let traces = match algorithm {
        Algorithm::Rwgm | Algorithm::RwgmProportional => {
            let policy = if algorithm == Algorithm::Rwgm {
                SelectionPolicy::Uniform
            } else {
                SelectionPolicy::Proportional
            };
            let options = PipelineOptions { lambda: None, policy };
            let (_, runs) = run_pipeline_with(inst, master_seed, episodes, options)?;
            runs.into_iter().map(|e| e.trace).collect()
        }
        Algorithm::Greedy => vec![greedy_trace(inst, master_seed)?],
        Algorithm::Optimal => vec![optimal_trace(inst, master_seed)?],
    };
    let opt = optimal_matching(inst)?.cost;
    let costs: Vec<f64> = traces.iter().map(|t| t.total_cost).collect();
    Ok(RunOutput {
        report: RatioReport::from_costs(algorithm, master_seed, opt, &costs),
        traces,
    })
}
