//! Requests that land off the server set are first moved to their nearest
//! server point; the tree matcher only ever sees server points.
//!
//! cargo run --example discretization

use rwgm::harness::{PipelineOptions, Prepared};
use rwgm::metric::{FiniteMetric, Instance};
use rwgm::online::discretize_request;
use rwgm::oracle::optimal_matching;

fn main() -> Result<(), rwgm::Error> {
    // fire stations at 0, 4 and 10 on a line; emergencies in between
    let coords = [0.0, 4.0, 10.0, 1.0, 3.0, 6.5, 9.5];
    let inst = Instance::new(FiniteMetric::line(&coords)?, vec![0, 1, 2], vec![5, 3, 4])?;

    let moved: Vec<usize> = inst
        .requests()
        .iter()
        .map(|&r| discretize_request(&inst, r))
        .collect::<Result<_, _>>()?;
    for (&r, &g) in inst.requests().iter().zip(&moved) {
        println!("request at x={} moves to server point x={}", coords[r], coords[g]);
    }
    let moved_inst = Instance::new(inst.metric().clone(), inst.servers().to_vec(), moved)?;
    let opt = optimal_matching(&inst)?.cost;
    let opt_moved = optimal_matching(&moved_inst)?.cost;
    println!("opt {opt}, opt after moving {opt_moved} (never more than twice opt)");

    let prepared = Prepared::new(&inst, PipelineOptions::default())?;
    let ep = prepared.episode(42, 0)?;
    for d in &ep.decisions {
        println!(
            "  {} -> {}: paid {:.1} <= {:.1} + {:.1}  (tree charged {:.3})",
            coords[d.request], coords[d.server], d.cost, d.inner_metric_cost, d.shift, d.inner_cost
        );
    }
    println!("episode cost {}, cross-leaf moves {}", ep.trace.total_cost, ep.moves);
    Ok(())
}
