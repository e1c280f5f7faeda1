//! Independent oracles and random instance builders shared by the
//! integration tests. Nothing here calls into the code paths it is used to
//! check: brute force enumerates permutations, graph metrics come from
//! Floyd–Warshall, and tree instances are assembled from raw parent links.

#![allow(dead_code)]

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rwgm::hst::{normalize_hst, HstTree, NodeId, RawTree};
use rwgm::metric::{FiniteMetric, Instance};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Minimum over all `n!` assignments.
pub fn brute_force_min(cost: &[Vec<f64>]) -> f64 {
    let n = cost.len();
    (0..n)
        .permutations(n)
        .map(|p| p.iter().enumerate().map(|(i, &j)| cost[i][j]).sum::<f64>())
        .fold(f64::INFINITY, f64::min)
}

pub fn instance_cost_matrix(inst: &Instance) -> Vec<Vec<f64>> {
    let m = inst.metric();
    inst.requests()
        .iter()
        .map(|&r| inst.servers().iter().map(|&s| m.distance(r, s)).collect())
        .collect()
}

/// Shortest-path metric of a random complete graph with weights in [1, 10).
pub fn random_graph_metric(n: usize, rng: &mut impl Rng) -> FiniteMetric {
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let w = rng.gen_range(1.0..10.0);
            d[i][j] = w;
            d[j][i] = w;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    FiniteMetric::from_matrix(d).unwrap()
}

pub fn random_euclidean_metric(n: usize, dim: usize, rng: &mut impl Rng) -> FiniteMetric {
    let coords: Vec<Vec<f64>> = (0..n).map(|_| (0..dim).map(|_| rng.gen::<f64>()).collect()).collect();
    FiniteMetric::euclidean(&coords).unwrap()
}

/// Random metric of one of several shapes.
pub fn random_metric(n: usize, rng: &mut impl Rng) -> FiniteMetric {
    match rng.gen_range(0..3) {
        0 => random_graph_metric(n, rng),
        1 => random_euclidean_metric(n, rng.gen_range(1..4), rng),
        _ => {
            // integer line points: exercises ties and coincident points
            let coords: Vec<f64> = (0..n).map(|_| rng.gen_range(0..6) as f64).collect();
            FiniteMetric::line(&coords).unwrap()
        }
    }
}

/// Random instance with multiplicities on a random metric.
pub fn random_instance(n: usize, points: usize, rng: &mut impl Rng) -> Instance {
    let metric = random_metric(points, rng);
    let servers = (0..n).map(|_| rng.gen_range(0..points)).collect();
    let requests = (0..n).map(|_| rng.gen_range(0..points)).collect();
    Instance::new(metric, servers, requests).unwrap()
}

/// Random raw tree with leaves at depths up to `height`; some leaves are
/// shallow so normalization has work to do. Each leaf carries its own point.
pub fn random_raw_tree(height: u32, lambda: f64, scale: f64, rng: &mut impl Rng) -> RawTree {
    let mut parent = vec![None];
    let mut point: Vec<Option<usize>> = vec![None];
    let mut frontier = vec![(0usize, 0u32)];
    let mut next_point = 0;
    while let Some((id, depth)) = frontier.pop() {
        let leaf = depth == height || (depth > 0 && rng.gen_bool(0.15));
        if leaf {
            point[id] = Some(next_point);
            next_point += 1;
            continue;
        }
        let kids = if depth == 0 {
            rng.gen_range(2..=4)
        } else {
            rng.gen_range(1..=4)
        };
        for _ in 0..kids {
            let c = parent.len();
            parent.push(Some(id));
            point.push(None);
            frontier.push((c, depth + 1));
        }
    }
    RawTree {
        parent,
        point,
        lambda,
        scale,
    }
}

/// A normalized tree plus `n` server leaves and `n` request leaves drawn at
/// random (requests in random order).
pub struct TreeInstance {
    pub tree: HstTree,
    pub servers: Vec<NodeId>,
    pub requests: Vec<NodeId>,
}

pub fn random_tree_instance(height: u32, n: usize, lambda: f64, scale: f64, rng: &mut impl Rng) -> TreeInstance {
    let bare = normalize_hst(&random_raw_tree(height, lambda, scale, rng)).unwrap();
    let points = bare.num_points();
    let server_points: Vec<usize> = (0..n).map(|_| rng.gen_range(0..points)).collect();
    let tree = bare.with_servers(&server_points).unwrap();
    let leaf = |p: usize| tree.leaf_of_point(p).unwrap();
    let servers = server_points.iter().map(|&p| leaf(p)).collect();
    let requests = (0..n).map(|_| leaf(rng.gen_range(0..points))).collect();
    TreeInstance {
        tree,
        servers,
        requests,
    }
}

/// Leaf-to-leaf tree distance by walking parent links and summing edge
/// weights `λ^(h(parent)-1)`.
pub fn walk_distance(tree: &HstTree, a: NodeId, b: NodeId) -> f64 {
    let ancestors = |mut v: NodeId| {
        let mut path = vec![v];
        while let Some(p) = tree.node(v).parent {
            path.push(p);
            v = p;
        }
        path
    };
    let pa = ancestors(a);
    let pb = ancestors(b);
    let side = |path: &[NodeId], other: &[NodeId]| {
        let mut total = 0.0;
        for &v in path {
            if other.contains(&v) {
                break;
            }
            let p = tree.node(v).parent.unwrap();
            total += tree.lambda().powi(tree.node(p).height as i32 - 1);
        }
        total
    };
    tree.scale() * (side(&pa, &pb) + side(&pb, &pa))
}

pub fn tree_cost_matrix(ti: &TreeInstance) -> Vec<Vec<f64>> {
    ti.requests
        .iter()
        .map(|&r| ti.servers.iter().map(|&s| walk_distance(&ti.tree, r, s)).collect())
        .collect()
}

/// Mean and standard error.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}
