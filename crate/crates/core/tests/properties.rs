mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rwgm::hst::{frt_embed, lambda_for_n, normalize_hst, EmbeddingParams};
use rwgm::metric::{validate_metric, FiniteMetric, Instance};
use rwgm::online::{RwgmState, SelectionPolicy};
use rwgm::oracle::{hst_cost_from_tau, min_cost_assignment, turning_point_tau, TurningPointProfile};

fn coords(max_points: usize, dim: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-100.0f64..100.0, dim), 1..=max_points)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn euclidean_point_sets_are_metrics(pts in coords(64, 3)) {
        prop_assert!(FiniteMetric::euclidean(&pts).is_ok());
    }

    #[test]
    fn server_submetric_is_exact_restriction(
        pts in coords(20, 2),
        picks in prop::collection::vec(any::<prop::sample::Index>(), 1..30),
    ) {
        let metric = FiniteMetric::euclidean(&pts).unwrap();
        let servers: Vec<usize> = picks.iter().map(|i| i.index(pts.len())).collect();
        let inst = Instance::new(metric.clone(), servers.clone(), servers).unwrap();
        let (sub, map) = inst.submetric_of_servers().unwrap();
        prop_assert!(validate_metric(sub.matrix()).is_ok());
        for (i, &a) in map.to_parent.iter().enumerate() {
            for (j, &b) in map.to_parent.iter().enumerate() {
                prop_assert_eq!(sub.distance(i, j).to_bits(), metric.distance(a, b).to_bits());
            }
        }
    }

    #[test]
    fn embeddings_dominate_and_form_a_metric(
        pts in coords(24, 2),
        seed in any::<u64>(),
        lambda in 1.1f64..12.0,
    ) {
        let metric = FiniteMetric::euclidean(&pts).unwrap();
        let tree = frt_embed(&metric, EmbeddingParams::new(lambda, seed).unwrap()).unwrap();
        prop_assert!(tree.validate().is_ok());
        let n = metric.len();
        for x in 0..n {
            for y in 0..n {
                let t = tree.point_distance(x, y).unwrap();
                prop_assert!(t >= metric.distance(x, y) * (1.0 - 1e-12));
                prop_assert_eq!(t, tree.point_distance(y, x).unwrap());
                for z in 0..n {
                    prop_assert!(t <= tree.point_distance(x, z).unwrap() + tree.point_distance(z, y).unwrap());
                }
            }
        }
        let again = frt_embed(&metric, EmbeddingParams::new(lambda, seed).unwrap()).unwrap();
        prop_assert_eq!(tree, again);
    }

    #[test]
    fn meet_formula_matches_path_walk(seed in any::<u64>(), height in 1u32..5, lambda in 1.5f64..8.0) {
        let mut rng = common::rng(seed);
        let tree = normalize_hst(&common::random_raw_tree(height, lambda, 1.7, &mut rng)).unwrap();
        prop_assert!(tree.validate().is_ok());
        let leaves: Vec<_> = tree.leaves().collect();
        for &a in &leaves {
            for &b in &leaves {
                let formula = tree.tree_distance(a, b).unwrap();
                let walk = common::walk_distance(&tree, a, b);
                prop_assert!(common::rel_close(formula, walk, 1e-12) || formula == walk);
                prop_assert_eq!(formula, tree.tree_distance_by_walk(a, b).unwrap());
            }
        }
    }

    #[test]
    fn normalization_only_lengthens_paths(seed in any::<u64>(), height in 1u32..5) {
        let mut rng = common::rng(seed);
        let raw = common::random_raw_tree(height, 3.0, 1.0, &mut rng);
        let tree = normalize_hst(&raw).unwrap();
        // raw distance: edges from depth d weigh λ^(H-d-1) with H the deepest leaf
        let depth = |mut v: usize| { let mut d = 0i32; while let Some(p) = raw.parent[v] { d += 1; v = p; } d };
        let big_h = (0..raw.parent.len()).filter(|&v| raw.point[v].is_some()).map(depth).max().unwrap();
        let raw_dist = |a: usize, b: usize| {
            let mut total = 0.0;
            let (mut a, mut b) = (a, b);
            while a != b {
                if depth(a) >= depth(b) {
                    total += 3f64.powi(big_h - depth(a));
                    a = raw.parent[a].unwrap();
                } else {
                    total += 3f64.powi(big_h - depth(b));
                    b = raw.parent[b].unwrap();
                }
            }
            total
        };
        let leaves: Vec<usize> = (0..raw.parent.len()).filter(|&v| raw.point[v].is_some()).collect();
        for &a in &leaves {
            for &b in &leaves {
                let before = raw_dist(a, b);
                let after = tree.tree_distance(a, b).unwrap();
                prop_assert!(after >= before - 1e-9);
            }
        }
    }

    #[test]
    fn rwgm_invariants(seed in any::<u64>(), height in 1u32..4, n in 1usize..20, proportional in any::<bool>()) {
        let mut rng = common::rng(seed);
        let ti = common::random_tree_instance(height, n, lambda_for_n(n).unwrap(), 1.0, &mut rng);
        let policy = if proportional { SelectionPolicy::Proportional } else { SelectionPolicy::Uniform };
        let run = |s: u64| {
            let mut state = RwgmState::new(&ti.tree, ChaCha8Rng::seed_from_u64(s), policy).unwrap();
            let mut out = Vec::new();
            for &r in &ti.requests {
                // nearest leaf that still has a server, by brute force
                let nearest = ti.tree.leaves()
                    .filter(|&l| state.remaining_multiplicity(l) > 0)
                    .map(|l| ti.tree.tree_distance(r, l).unwrap())
                    .fold(f64::INFINITY, f64::min);
                let a = state.serve(r).unwrap();
                assert_eq!(a.cost, nearest);
                assert!(state.green_is_consistent());
                out.push(a);
            }
            assert_eq!(state.unassigned(), 0);
            assert!(state.serve(ti.requests[0]).is_err());
            out
        };
        let first = run(seed);
        // each server instance used exactly once
        let mut used: Vec<usize> = first.iter().map(|a| a.leaf).collect();
        let mut expected = ti.servers.clone();
        used.sort_unstable();
        expected.sort_unstable();
        prop_assert_eq!(used, expected);
        prop_assert_eq!(first, run(seed));
    }

    #[test]
    fn hungarian_is_optimal(seed in any::<u64>(), n in 1usize..=6, points in 1usize..8) {
        let mut rng = common::rng(seed);
        let inst = common::random_instance(n, points, &mut rng);
        let cost = common::instance_cost_matrix(&inst);
        let (assignment, total) = min_cost_assignment(&cost).unwrap();
        let mut cols = assignment.clone();
        cols.sort_unstable();
        prop_assert_eq!(cols, (0..n).collect::<Vec<_>>());
        let brute = common::brute_force_min(&cost);
        prop_assert!(common::rel_close(total, brute, 1e-9) || total == brute);
    }

    #[test]
    fn optimal_pairs_realize_the_tau_profile(seed in any::<u64>(), height in 1u32..4, n in 1usize..7) {
        let mut rng = common::rng(seed);
        let ti = common::random_tree_instance(height, n, 3.0, 1.0, &mut rng);
        let cost = common::tree_cost_matrix(&ti);
        let (server_of, total) = min_cost_assignment(&cost).unwrap();
        let pairs: Vec<_> = server_of.iter().enumerate().map(|(r, &s)| (ti.servers[s], ti.requests[r])).collect();
        let from_pairs = TurningPointProfile::from_pairs(&ti.tree, &pairs).unwrap();
        let tau = turning_point_tau(&ti.tree, &ti.servers, &ti.requests).unwrap();
        prop_assert!(common::rel_close(hst_cost_from_tau(&from_pairs, &ti.tree), total, 1e-9) || total == 0.0);
        prop_assert!(common::rel_close(hst_cost_from_tau(&tau, &ti.tree), total, 1e-9) || total == 0.0);
        // every optimal matching crosses each edge exactly |imbalance| times
        prop_assert_eq!(from_pairs, tau);
    }
}
