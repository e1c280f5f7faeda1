//! Building metrics, catching malformed ones, and restricting an instance to
//! its server points.
//!
//! cargo run --example metric_validation

use rwgm::metric::{validate_metric, FiniteMetric, Instance};

fn main() -> Result<(), rwgm::Error> {
    let good = vec![vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.0], vec![2.0, 1.0, 0.0]];
    println!("path metric: {:?}", validate_metric(&good));

    let shortcut = vec![vec![0.0, 1.0, 5.0], vec![1.0, 0.0, 1.0], vec![5.0, 1.0, 0.0]];
    match validate_metric(&shortcut) {
        Ok(()) => println!("unexpected: accepted"),
        Err(e) => println!("rejected: {e}"),
    }
    let lopsided = vec![vec![0.0, 1.0], vec![2.0, 0.0]];
    if let Err(e) = validate_metric(&lopsided) {
        println!("rejected: {e}");
    }

    let plane = FiniteMetric::euclidean(&[vec![0.0, 0.0], vec![3.0, 4.0], vec![6.0, 8.0], vec![0.0, 1.0]])?;
    println!(
        "euclidean: diameter {}, closest pair {:?}",
        plane.diameter(),
        plane.min_positive_distance()
    );

    // servers may repeat; the submetric keeps one copy of each point
    let inst = Instance::new(plane, vec![1, 1, 3], vec![0, 2, 2])?;
    let (sub, mapping) = inst.submetric_of_servers()?;
    println!(
        "server points {:?} -> submetric of {} points",
        mapping.to_parent,
        sub.len()
    );
    println!("server counts {:?}", inst.server_counts());
    println!("{}", serde_json::to_string(&inst)?);
    Ok(())
}
