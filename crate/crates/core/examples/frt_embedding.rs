//! Sampling random HSTs over a point set and measuring their stretch.
//!
//! cargo run --example frt_embedding

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rwgm::hst::{frt_embed, EmbeddingParams};
use rwgm::metric::FiniteMetric;

fn main() -> Result<(), rwgm::Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let coords: Vec<Vec<f64>> = (0..12)
        .map(|_| vec![rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0)])
        .collect();
    let metric = FiniteMetric::euclidean(&coords)?;
    let n = metric.len();

    let tree = frt_embed(&metric, EmbeddingParams::for_size(n, 1)?)?;
    println!(
        "one sample: lambda {:.3}, height {}, {} nodes, scale {:.4}",
        tree.lambda(),
        tree.height(),
        tree.nodes().len(),
        tree.scale()
    );

    let samples = 500;
    let mut mean = vec![vec![0.0; n]; n];
    let mut worst: f64 = 0.0;
    for seed in 0..samples {
        let t = frt_embed(&metric, EmbeddingParams::new(2.0, seed)?)?;
        for x in 0..n {
            for y in (x + 1)..n {
                let stretch = t.point_distance(x, y).unwrap() / metric.distance(x, y);
                assert!(stretch >= 1.0 - 1e-12, "trees never shrink distances");
                mean[x][y] += stretch / samples as f64;
                worst = worst.max(stretch);
            }
        }
    }
    let max_mean = mean.iter().flatten().fold(0.0f64, |m, &s| m.max(s));
    println!("lambda 2, {samples} samples: max per-pair mean stretch {max_mean:.2}, worst single stretch {worst:.2}");

    let small = frt_embed(&FiniteMetric::line(&[0.0, 1.0, 3.0])?, EmbeddingParams::new(2.0, 0)?)?;
    println!("{}", serde_json::to_string_pretty(&small.dump())?);
    Ok(())
}
