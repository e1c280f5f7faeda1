use super::OracleError;
use crate::hst::{half_path_weight, HstTree, NodeId};

/// Number of matched pairs turning at each node, i.e. whose tree path has
/// that node as its highest point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TurningPointProfile {
    pub tau: Vec<u64>,
    pub heights: Vec<u32>,
}

impl TurningPointProfile {
    /// Profile of a concrete matching, given as `(server leaf, request leaf)`
    /// pairs.
    pub fn from_pairs(tree: &HstTree, pairs: &[(NodeId, NodeId)]) -> Result<Self, OracleError> {
        let mut tau = vec![0u64; tree.nodes().len()];
        for &(s, r) in pairs {
            let u = tree.meet(s, r).map_err(|_| OracleError::NotALeaf(s.max(r)))?;
            if s != r {
                tau[u] += 1;
            }
        }
        Ok(Self {
            tau,
            heights: heights(tree),
        })
    }

    /// Number of pairs whose endpoints sit on different leaves.
    pub fn moves(&self) -> u64 {
        self.tau.iter().sum()
    }
}

fn heights(tree: &HstTree) -> Vec<u32> {
    tree.nodes().iter().map(|n| n.height).collect()
}

/// Turning-point counts of any optimal matching between servers and
/// requests placed on leaves.
///
/// With `b(v)` = requests minus servers below `v`, an optimal matching
/// sends exactly `|b(v)|` pairs across the edge above `v`, so
/// `τ(u) = (Σ_children |b(c)| − |b(u)|) / 2`.
pub fn turning_point_tau(
    tree: &HstTree,
    server_leaves: &[NodeId],
    request_leaves: &[NodeId],
) -> Result<TurningPointProfile, OracleError> {
    if server_leaves.len() != request_leaves.len() {
        return Err(OracleError::SizeMismatch {
            servers: server_leaves.len(),
            requests: request_leaves.len(),
        });
    }
    let nodes = tree.nodes();
    let mut imbalance = vec![0i64; nodes.len()];
    for (leaves, sign) in [(request_leaves, 1i64), (server_leaves, -1i64)] {
        for &leaf in leaves {
            if !nodes.get(leaf).is_some_and(|n| n.is_leaf()) {
                return Err(OracleError::NotALeaf(leaf));
            }
            let mut v = Some(leaf);
            while let Some(id) = v {
                imbalance[id] += sign;
                v = nodes[id].parent;
            }
        }
    }
    let tau = nodes
        .iter()
        .enumerate()
        .map(|(id, node)| {
            if node.is_leaf() {
                return 0;
            }
            let below: i64 = node.children.iter().map(|&c| imbalance[c].abs()).sum();
            let crossing = below - imbalance[id].abs();
            debug_assert!(crossing >= 0 && crossing % 2 == 0);
            (crossing / 2) as u64
        })
        .collect();
    Ok(TurningPointProfile {
        tau,
        heights: heights(tree),
    })
}

/// `scale · 2 Σ_u τ(u) Σ_{i=1..h(u)} λ^(i-1)`, the cost of any matching
/// with this profile.
pub fn hst_cost_from_tau(profile: &TurningPointProfile, tree: &HstTree) -> f64 {
    let weighted: f64 = profile
        .tau
        .iter()
        .zip(&profile.heights)
        .filter(|(&t, _)| t > 0)
        .map(|(&t, &h)| t as f64 * half_path_weight(tree.lambda(), h))
        .fold(0.0, |acc, x| acc + x);
    tree.scale() * 2.0 * weighted
}

/// Inputs of the expected-cost envelope for RWGM on a tree.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundParams {
    pub lambda: f64,
    pub scale: f64,
    pub n: usize,
    /// `c[t-1] = c_t` with `c_1 = 1/2` and `c_t = c_(t-1) + 2^(-t)`.
    pub c: Vec<f64>,
}

impl BoundParams {
    pub fn new(lambda: f64, scale: f64, n: usize, max_height: u32) -> Self {
        let mut c = Vec::with_capacity(max_height as usize);
        let mut ct = 0.0;
        for t in 1..=max_height {
            ct += 0.5f64.powi(t as i32);
            c.push(ct);
        }
        Self { lambda, scale, n, c }
    }

    pub fn for_tree(tree: &HstTree, n: usize) -> Self {
        Self::new(tree.lambda(), tree.scale(), n, tree.height())
    }
}

/// `scale · 2 Σ_u τ(u) Σ_{i=1..h(u)} c_i λ^i`.
pub fn bound_rwgm_hst(profile: &TurningPointProfile, params: &BoundParams) -> f64 {
    let weighted: f64 = profile
        .tau
        .iter()
        .zip(&profile.heights)
        .filter(|(&t, _)| t > 0)
        .map(|(&t, &h)| {
            let inner: f64 = (1..=h)
                .map(|i| params.c[i as usize - 1] * params.lambda.powi(i as i32))
                .fold(0.0, |acc, x| acc + x);
            t as f64 * inner
        })
        .fold(0.0, |acc, x| acc + x);
    params.scale * 2.0 * weighted
}

/// `Σ_u τ(u) Σ_{i=1..h(u)} (1 + ln n)^i`: envelope for the expected number
/// of cross-leaf assignments.
pub fn expected_moves_bound(profile: &TurningPointProfile, n: usize) -> f64 {
    let base = 1.0 + (n.max(1) as f64).ln();
    profile
        .tau
        .iter()
        .zip(&profile.heights)
        .filter(|(&t, _)| t > 0)
        .map(|(&t, &h)| t as f64 * (1..=h).map(|i| base.powi(i as i32)).sum::<f64>())
        .fold(0.0, |acc, x| acc + x)
}
