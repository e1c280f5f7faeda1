//! Finite metric spaces and matching instances.
//!
//! Points are dense indices `0..len`; labels are carried along as metadata
//! only. A [`FiniteMetric`] is validated on construction, so every value of
//! the type in circulation satisfies symmetry, a zero diagonal and the
//! triangle inequality (up to an additive `1e-9 × max entry` slack that
//! absorbs rounding in generated Euclidean distances).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative slack used for the triangle inequality, scaled by the largest entry.
pub const TRIANGLE_SLACK: f64 = 1e-9;

/// Input that is not a distance matrix at all.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum StructuralError {
    #[error("distance matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("label count {labels} does not match matrix size {size}")]
    LabelCount { labels: usize, size: usize },
    #[error("entry ({i}, {j}) is not finite")]
    NonFinite { i: usize, j: usize },
    #[error("entry ({i}, {j}) is negative: {value}")]
    Negative { i: usize, j: usize, value: f64 },
    #[error("metric has no points")]
    Empty,
}

/// A well-formed matrix that breaks one of the metric axioms.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Violation {
    #[error("nonzero diagonal at {i}: {value}")]
    Diagonal { i: usize, value: f64 },
    #[error("asymmetric pair ({i}, {j}): {forward} vs {backward}")]
    Asymmetric {
        i: usize,
        j: usize,
        forward: f64,
        backward: f64,
    },
    #[error("triangle inequality fails for ({i}, {j}, {k}): d(i,j) = {direct} > d(i,k) + d(k,j) = {detour}")]
    Triangle {
        i: usize,
        j: usize,
        k: usize,
        direct: f64,
        detour: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("malformed distance matrix: {0}")]
    Structural(#[from] StructuralError),
    #[error("not a metric: {0}")]
    Violation(#[from] Violation),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InstanceError {
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("{servers} servers but {requests} requests")]
    SizeMismatch { servers: usize, requests: usize },
    #[error("{role} index {index} is out of range for a {len}-point metric")]
    OutOfRange {
        role: &'static str,
        index: usize,
        len: usize,
    },
    #[error("instance has no servers")]
    NoServers,
}

/// Checks the distance-matrix shape and entries, then the metric axioms.
///
/// Structural problems (ragged rows, NaN, negative entries) are reported as
/// [`MetricError::Structural`]; axiom failures name the offending pair or
/// triple through [`MetricError::Violation`].
pub fn validate_metric(dist: &[Vec<f64>]) -> Result<(), MetricError> {
    let n = dist.len();
    if n == 0 {
        return Err(StructuralError::Empty.into());
    }
    let mut max_entry = 0.0f64;
    for (i, row) in dist.iter().enumerate() {
        if row.len() != n {
            return Err(StructuralError::NotSquare {
                row: i,
                len: row.len(),
                expected: n,
            }
            .into());
        }
        for (j, &value) in row.iter().enumerate() {
            if !value.is_finite() {
                return Err(StructuralError::NonFinite { i, j }.into());
            }
            if value < 0.0 {
                return Err(StructuralError::Negative { i, j, value }.into());
            }
            max_entry = max_entry.max(value);
        }
    }
    for i in 0..n {
        if dist[i][i] != 0.0 {
            return Err(Violation::Diagonal { i, value: dist[i][i] }.into());
        }
        for j in (i + 1)..n {
            if dist[i][j] != dist[j][i] {
                return Err(Violation::Asymmetric {
                    i,
                    j,
                    forward: dist[i][j],
                    backward: dist[j][i],
                }
                .into());
            }
        }
    }
    let slack = TRIANGLE_SLACK * max_entry;
    for i in 0..n {
        for j in (i + 1)..n {
            let direct = dist[i][j];
            for k in 0..n {
                let detour = dist[i][k] + dist[k][j];
                if direct > detour + slack {
                    return Err(Violation::Triangle {
                        i,
                        j,
                        k,
                        direct,
                        detour,
                    }
                    .into());
                }
            }
        }
    }
    Ok(())
}

/// A validated finite metric space over points `0..len()`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteMetric {
    labels: Vec<String>,
    dist: Vec<Vec<f64>>,
}

impl FiniteMetric {
    pub fn new(labels: Vec<String>, dist: Vec<Vec<f64>>) -> Result<Self, MetricError> {
        if labels.len() != dist.len() {
            return Err(StructuralError::LabelCount {
                labels: labels.len(),
                size: dist.len(),
            }
            .into());
        }
        validate_metric(&dist)?;
        Ok(Self { labels, dist })
    }

    /// Builds a metric with labels `p0, p1, ...`.
    pub fn from_matrix(dist: Vec<Vec<f64>>) -> Result<Self, MetricError> {
        let labels = (0..dist.len()).map(|i| format!("p{i}")).collect();
        Self::new(labels, dist)
    }

    /// Euclidean metric over the given coordinates.
    pub fn euclidean(coords: &[Vec<f64>]) -> Result<Self, MetricError> {
        let dist = coords
            .iter()
            .map(|a| {
                coords
                    .iter()
                    .map(|b| a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt())
                    .collect()
            })
            .collect();
        Self::from_matrix(dist)
    }

    /// Metric on the real line.
    pub fn line(coords: &[f64]) -> Result<Self, MetricError> {
        let dist = coords
            .iter()
            .map(|a| coords.iter().map(|b| (a - b).abs()).collect())
            .collect();
        Self::from_matrix(dist)
    }

    /// Uniform metric: every pair of distinct points at distance `d`.
    pub fn uniform(len: usize, d: f64) -> Result<Self, MetricError> {
        let dist = (0..len)
            .map(|i| (0..len).map(|j| if i == j { 0.0 } else { d }).collect())
            .collect();
        Self::from_matrix(dist)
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    #[inline]
    pub fn distance(&self, a: usize, b: usize) -> f64 {
        self.dist[a][b]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.dist
    }

    /// Largest pairwise distance.
    pub fn diameter(&self) -> f64 {
        self.dist.iter().flat_map(|row| row.iter().copied()).fold(0.0, f64::max)
    }

    /// Smallest nonzero pairwise distance, `None` if all points coincide.
    pub fn min_positive_distance(&self) -> Option<f64> {
        self.dist
            .iter()
            .flat_map(|row| row.iter().copied())
            .filter(|&d| d > 0.0)
            .min_by(f64::total_cmp)
    }

    /// Restriction to `points`, in the given order. Distances are copied, not
    /// recomputed.
    pub fn restrict(&self, points: &[usize]) -> FiniteMetric {
        let labels = points.iter().map(|&p| self.labels[p].clone()).collect();
        let dist = points
            .iter()
            .map(|&a| points.iter().map(|&b| self.dist[a][b]).collect())
            .collect();
        FiniteMetric { labels, dist }
    }
}

/// Index correspondence between a parent metric and a submetric.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointMapping {
    /// `to_parent[i]` is the parent index of submetric point `i`.
    pub to_parent: Vec<usize>,
    /// `to_sub[p]` is the submetric index of parent point `p`, if kept.
    pub to_sub: Vec<Option<usize>>,
}

/// Servers, requests and the metric they live in.
///
/// Servers and requests are multisets of point indices of equal total size;
/// the request order is part of the instance (the adversary fixes it up
/// front).
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    metric: FiniteMetric,
    servers: Vec<usize>,
    requests: Vec<usize>,
}

impl Instance {
    pub fn new(metric: FiniteMetric, servers: Vec<usize>, requests: Vec<usize>) -> Result<Self, InstanceError> {
        if servers.len() != requests.len() {
            return Err(InstanceError::SizeMismatch {
                servers: servers.len(),
                requests: requests.len(),
            });
        }
        let len = metric.len();
        for (role, list) in [("server", &servers), ("request", &requests)] {
            if let Some(&index) = list.iter().find(|&&p| p >= len) {
                return Err(InstanceError::OutOfRange { role, index, len });
            }
        }
        Ok(Self {
            metric,
            servers,
            requests,
        })
    }

    pub fn metric(&self) -> &FiniteMetric {
        &self.metric
    }

    pub fn servers(&self) -> &[usize] {
        &self.servers
    }

    pub fn requests(&self) -> &[usize] {
        &self.requests
    }

    /// Number of servers (equivalently, requests).
    pub fn size(&self) -> usize {
        self.servers.len()
    }

    /// Distinct server points in increasing index order.
    pub fn distinct_servers(&self) -> Vec<usize> {
        let mut points = self.servers.clone();
        points.sort_unstable();
        points.dedup();
        points
    }

    /// Server multiplicity per point.
    pub fn server_counts(&self) -> BTreeMap<usize, usize> {
        let mut counts = BTreeMap::new();
        for &s in &self.servers {
            *counts.entry(s).or_insert(0) += 1;
        }
        counts
    }

    /// The metric spanned by the distinct server points, with the index
    /// mapping back to this instance's metric.
    pub fn submetric_of_servers(&self) -> Result<(FiniteMetric, PointMapping), InstanceError> {
        if self.servers.is_empty() {
            return Err(InstanceError::NoServers);
        }
        let to_parent = self.distinct_servers();
        let mut to_sub = vec![None; self.metric.len()];
        for (i, &p) in to_parent.iter().enumerate() {
            to_sub[p] = Some(i);
        }
        let sub = self.metric.restrict(&to_parent);
        Ok((sub, PointMapping { to_parent, to_sub }))
    }

    pub fn to_json(&self) -> InstanceJson {
        InstanceJson {
            points: self.metric.labels.clone(),
            dist: self.metric.dist.clone(),
            servers: self.servers.clone(),
            requests: self.requests.clone(),
        }
    }
}

/// On-disk instance format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceJson {
    pub points: Vec<String>,
    pub dist: Vec<Vec<f64>>,
    pub servers: Vec<usize>,
    pub requests: Vec<usize>,
}

impl TryFrom<InstanceJson> for Instance {
    type Error = InstanceError;

    fn try_from(json: InstanceJson) -> Result<Self, Self::Error> {
        let metric = FiniteMetric::new(json.points, json.dist)?;
        Instance::new(metric, json.servers, json.requests)
    }
}

impl Serialize for Instance {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Instance {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let json = InstanceJson::deserialize(deserializer)?;
        Instance::try_from(json).map_err(serde::de::Error::custom)
    }
}
