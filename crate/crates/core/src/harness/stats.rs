use serde::{Deserialize, Serialize};

use crate::online::Algorithm;

/// Mean, standard error and order statistics of a sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    /// Sample standard deviation over `sqrt(len)`; zero for one sample.
    pub std_error: f64,
    pub min: f64,
    pub max: f64,
    pub p05: f64,
    pub p25: f64,
    pub p50: f64,
    pub p75: f64,
    pub p95: f64,
}

impl Summary {
    /// Panics on an empty sample.
    pub fn of(values: &[f64]) -> Self {
        assert!(!values.is_empty(), "summary of an empty sample");
        let len = values.len() as f64;
        let mean = values.iter().sum::<f64>() / len;
        let std_error = if values.len() > 1 {
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (len - 1.0);
            (var / len).sqrt()
        } else {
            0.0
        };
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let q = |p: f64| quantile_sorted(&sorted, p);
        Self {
            mean,
            std_error,
            min: sorted[0],
            max: sorted[sorted.len() - 1],
            p05: q(0.05),
            p25: q(0.25),
            p50: q(0.5),
            p75: q(0.75),
            p95: q(0.95),
        }
    }
}

/// Linear interpolation between closest ranks.
fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Aggregate of one algorithm on one instance over seeded episodes.
///
/// `ratio` is `None` when the optimum is zero; the costs are then the only
/// meaningful figures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub algorithm: Algorithm,
    pub master_seed: u64,
    pub episodes: usize,
    pub opt: f64,
    pub cost: Summary,
    pub ratio: Option<Summary>,
}

impl RatioReport {
    pub fn from_costs(algorithm: Algorithm, master_seed: u64, opt: f64, costs: &[f64]) -> Self {
        let ratio = (opt > 0.0).then(|| {
            let ratios: Vec<f64> = costs.iter().map(|c| c / opt).collect();
            Summary::of(&ratios)
        });
        Self {
            algorithm,
            master_seed,
            episodes: costs.len(),
            opt,
            cost: Summary::of(costs),
            ratio,
        }
    }

    pub fn mean_ratio(&self) -> Option<f64> {
        self.ratio.as_ref().map(|r| r.mean)
    }

    pub fn ratio_std_error(&self) -> Option<f64> {
        self.ratio.as_ref().map(|r| r.std_error)
    }
}
