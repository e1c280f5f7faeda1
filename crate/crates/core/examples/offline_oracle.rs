//! Exact offline optimum and the per-node turning-point profile on a tree.
//!
//! cargo run --example offline_oracle

use rwgm::hst::HstTree;
use rwgm::metric::FiniteMetric;
use rwgm::metric::Instance;
use rwgm::oracle::{
    bound_rwgm_hst, expected_moves_bound, harmonic, hst_cost_from_tau, min_cost_assignment, optimal_matching,
    turning_point_tau, uniform_bound, BoundParams,
};

fn main() -> Result<(), rwgm::Error> {
    let cost = vec![vec![4.0, 1.0, 3.0], vec![2.0, 0.0, 5.0], vec![3.0, 2.0, 2.0]];
    let (assignment, total) = min_cost_assignment(&cost)?;
    println!("assignment {assignment:?} total {total}");

    let inst = Instance::new(FiniteMetric::line(&[0.0, 1.0, 5.0, 6.0])?, vec![0, 2], vec![1, 3])?;
    let opt = optimal_matching(&inst)?;
    println!("line optimum {} via pairs {:?}", opt.cost, opt.pairs);

    // star with 4 leaves, servers at 0..2, requests at 3, 0
    let tree = HstTree::star(4, 2.0, 1.0)?.with_servers(&[0, 1, 2])?;
    let leaf = |p| tree.leaf_of_point(p).unwrap();
    let servers = [leaf(0), leaf(1), leaf(2)];
    let requests = [leaf(3), leaf(0), leaf(1)];
    let tau = turning_point_tau(&tree, &servers, &requests)?;
    println!(
        "turning points at the root: {}, tree optimum {}",
        tau.moves(),
        hst_cost_from_tau(&tau, &tree)
    );
    println!(
        "RWGM envelopes: cost {:.3}, moves {:.3}",
        bound_rwgm_hst(&tau, &BoundParams::for_tree(&tree, 3)),
        expected_moves_bound(&tau, 3)
    );

    for q in 1..=5 {
        let row: Vec<String> = (0..=q)
            .map(|d| format!("{:.3}", uniform_bound(q, d).unwrap()))
            .collect();
        println!("H_{q} = {:.4}  uniform bounds by delta: {}", harmonic(q), row.join(" "));
    }
    Ok(())
}
