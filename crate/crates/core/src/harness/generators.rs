//! Adversary families. Every generator is a deterministic function of its
//! [`GeneratorSpec`].

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metric::{FiniteMetric, Instance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// Center plus `n` unit spokes; servers on the spokes, requests at the
    /// center then spokes `1..n-1`. Greedy pays `2n - 1` against an optimum
    /// of 1.
    Star,
    /// Uniform space on `n + 1` points with servers `0..n` and requests
    /// `(n, 0, 1, …, n-2)`: the only request without a server arrives first.
    NestedUniform,
    /// `n` uniform points in `[0, 1]^dim`; servers and requests drawn from
    /// them with replacement.
    Euclidean,
    /// `n` server and `n` request coordinates uniform on `[0, range]`,
    /// requests in random order.
    Line,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Star, Family::NestedUniform, Family::Euclidean, Family::Line];

    pub fn tag(self) -> &'static str {
        match self {
            Family::Star => "star",
            Family::NestedUniform => "nested-uniform",
            Family::Euclidean => "euclidean",
            Family::Line => "line",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Family {
    type Err = GeneratorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.tag() == s)
            .ok_or_else(|| GeneratorError::UnknownFamily(s.to_owned()))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeneratorError {
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("instance size must be at least 1")]
    ZeroSize,
    #[error("euclidean dimension must be at least 1")]
    ZeroDimension,
    #[error("line range must be positive and finite, got {0}")]
    Range(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorSpec {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
    pub dim: usize,
    pub range: f64,
}

impl GeneratorSpec {
    pub fn new(family: Family, n: usize, seed: u64) -> Self {
        Self {
            family,
            n,
            seed,
            dim: 2,
            range: 1.0,
        }
    }

    pub fn validate(&self) -> Result<(), GeneratorError> {
        if self.n == 0 {
            return Err(GeneratorError::ZeroSize);
        }
        match self.family {
            Family::Euclidean if self.dim == 0 => Err(GeneratorError::ZeroDimension),
            Family::Line if !(self.range > 0.0 && self.range.is_finite()) => Err(GeneratorError::Range(self.range)),
            _ => Ok(()),
        }
    }
}

pub fn generate_instance(spec: &GeneratorSpec) -> Result<Instance, GeneratorError> {
    spec.validate()?;
    let n = spec.n;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (metric, servers, requests) = match spec.family {
        Family::Star => {
            let labels = std::iter::once("center".to_owned())
                .chain((1..=n).map(|i| format!("leaf{i}")))
                .collect();
            let dist = (0..=n)
                .map(|i| {
                    (0..=n)
                        .map(|j| match (i, j) {
                            _ if i == j => 0.0,
                            (0, _) | (_, 0) => 1.0,
                            _ => 2.0,
                        })
                        .collect()
                })
                .collect();
            let metric = FiniteMetric::new(labels, dist).expect("star metric");
            (metric, (1..=n).collect(), (0..n).collect())
        }
        Family::NestedUniform => {
            let metric = FiniteMetric::uniform(n + 1, 1.0).expect("uniform metric");
            let requests = std::iter::once(n).chain(0..n - 1).collect();
            (metric, (0..n).collect(), requests)
        }
        Family::Euclidean => {
            let coords: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..spec.dim).map(|_| rng.gen::<f64>()).collect())
                .collect();
            let metric = FiniteMetric::euclidean(&coords).expect("euclidean metric");
            let servers = (0..n).map(|_| rng.gen_range(0..n)).collect();
            let requests = (0..n).map(|_| rng.gen_range(0..n)).collect();
            (metric, servers, requests)
        }
        Family::Line => {
            let coords: Vec<f64> = (0..2 * n).map(|_| rng.gen::<f64>() * spec.range).collect();
            let metric = FiniteMetric::line(&coords).expect("line metric");
            let mut requests: Vec<usize> = (n..2 * n).collect();
            requests.shuffle(&mut rng);
            (metric, (0..n).collect(), requests)
        }
    };
    Ok(Instance::new(metric, servers, requests).expect("generated instance is consistent"))
}
