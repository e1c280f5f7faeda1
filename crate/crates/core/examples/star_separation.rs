//! The star cascade: greedy pays 2k - 1 times the optimum while the
//! randomized pipeline stays logarithmic.
//!
//! cargo run --release --example star_separation

use rwgm::harness::{generate_instance, greedy_trace, run_pipeline, Family, GeneratorSpec};
use rwgm::oracle::harmonic;

fn main() -> Result<(), rwgm::Error> {
    println!("{:>4} {:>8} {:>10} {:>8} {:>10}", "k", "greedy", "rwgm", "se", "2H_k+1");
    for k in [2, 4, 8, 16, 32] {
        let inst = generate_instance(&GeneratorSpec::new(Family::Star, k, 0))?;
        let greedy = greedy_trace(&inst, 0)?.total_cost;
        let report = run_pipeline(&inst, 1, 2000)?;
        println!(
            "{k:>4} {greedy:>8} {:>10.3} {:>8.3} {:>10.3}",
            report.mean_ratio().unwrap(),
            report.ratio_std_error().unwrap(),
            2.0 * harmonic(k as i64) + 1.0
        );
    }
    Ok(())
}
