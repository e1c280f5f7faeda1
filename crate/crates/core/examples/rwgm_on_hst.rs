//! Randomized weighted greedy matching directly on a small HST.
//!
//! cargo run --example rwgm_on_hst

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rwgm::hst::{normalize_hst, RawTree};
use rwgm::online::{RwgmState, SelectionPolicy};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // root -> {A, B}; A -> {a0, a1}; B -> {b0, b1, b2}
    let raw = RawTree {
        parent: vec![None, Some(0), Some(0), Some(1), Some(1), Some(2), Some(2), Some(2)],
        point: vec![None, None, None, Some(0), Some(1), Some(2), Some(3), Some(4)],
        lambda: 3.0,
        scale: 1.0,
    };
    let tree = normalize_hst(&raw)?.with_servers(&[1, 2, 2, 3])?;
    let leaf = |p| tree.leaf_of_point(p).unwrap();
    println!(
        "height {}, distances: same parent {}, across root {}",
        tree.height(),
        tree.meet_distance(1),
        tree.meet_distance(2)
    );

    for policy in [SelectionPolicy::Uniform, SelectionPolicy::Proportional] {
        let mut state = RwgmState::new(&tree, ChaCha8Rng::seed_from_u64(5), policy)?;
        println!("{policy:?}");
        for p in [0, 4, 0, 2] {
            let a = state.serve(leaf(p))?;
            println!(
                "  request at point {p} -> point {} cost {} (green nodes left: {})",
                tree.node(a.leaf).points[0],
                a.cost,
                state.green_nodes().count()
            );
        }
    }
    Ok(())
}
