use std::io::Write;

use serde::Serialize;

use super::generators::{generate_instance, Family, GeneratorSpec};
use super::pipeline::run_algorithm;
use crate::online::Algorithm;
use crate::Error;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub algorithm: Algorithm,
    /// Empty when the instance has a zero optimum.
    pub mean_ratio: Option<f64>,
    pub std_error: Option<f64>,
    pub mean_cost: f64,
    pub opt: f64,
}

/// Instance seed for size `n` under `master_seed` (SplitMix64 finalizer).
pub fn instance_seed(master_seed: u64, n: usize) -> u64 {
    let mut z = master_seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// One row per `(n, algorithm)`, in the order given. `template` supplies
/// family parameters; its `n` and `seed` are overridden per size.
pub fn sweep(
    template: &GeneratorSpec,
    sizes: &[usize],
    algorithms: &[Algorithm],
    episodes: usize,
    master_seed: u64,
) -> Result<Vec<SweepRow>, Error> {
    if sizes.is_empty() {
        return Err(Error::Config("sweep needs at least one size".into()));
    }
    let mut rows = Vec::with_capacity(sizes.len() * algorithms.len());
    for &n in sizes {
        let spec = GeneratorSpec {
            n,
            seed: instance_seed(master_seed, n),
            ..*template
        };
        let inst = generate_instance(&spec)?;
        for &algorithm in algorithms {
            let out = run_algorithm(&inst, algorithm, master_seed, episodes)?;
            rows.push(SweepRow {
                n,
                algorithm,
                mean_ratio: out.report.mean_ratio(),
                std_error: out.report.ratio_std_error(),
                mean_cost: out.report.cost.mean,
                opt: out.report.opt,
            });
        }
    }
    Ok(rows)
}

/// Convenience wrapper over [`sweep`] with default family parameters.
pub fn sweep_family(
    family: Family,
    sizes: &[usize],
    algorithms: &[Algorithm],
    episodes: usize,
    master_seed: u64,
) -> Result<Vec<SweepRow>, Error> {
    sweep(
        &GeneratorSpec::new(family, 1, 0),
        sizes,
        algorithms,
        episodes,
        master_seed,
    )
}

/// CSV with header `n,algorithm,mean_ratio,std_error,mean_cost,opt`.
pub fn write_sweep_csv<W: Write>(out: W, rows: &[SweepRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record(["n", "algorithm", "mean_ratio", "std_error", "mean_cost", "opt"])?;
    }
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
