//! Mean competitive ratio across instance sizes, written as CSV.
//!
//! cargo run --release --example scaling_sweep [family]

use rwgm::harness::{sweep_family, write_sweep_csv, Family};
use rwgm::online::Algorithm;

fn main() -> Result<(), rwgm::Error> {
    let family: Family = match std::env::args().nth(1) {
        Some(tag) => tag.parse()?,
        None => Family::NestedUniform,
    };
    let sizes = [8, 16, 32, 64];
    let rows = sweep_family(family, &sizes, &[Algorithm::Rwgm, Algorithm::Greedy], 300, 2024)?;
    write_sweep_csv(std::io::stdout().lock(), &rows)?;

    let rwgm: Vec<_> = rows.iter().filter(|r| r.algorithm == Algorithm::Rwgm).collect();
    if let (Some(first), Some(last)) = (rwgm.first(), rwgm.last()) {
        if let (Some(a), Some(b)) = (first.mean_ratio, last.mean_ratio) {
            eprintln!("n x{} -> ratio x{:.2}", last.n / first.n, b / a);
        }
    }
    Ok(())
}
