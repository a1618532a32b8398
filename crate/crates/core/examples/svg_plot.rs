//! Two interleaved moons clustered and drawn as an SVG scatter plot.
//!
//! ```text
//! cargo run --example svg_plot -- [output.svg] [radius]
//! ```

use std::f64::consts::PI;

use erode::plot::emit_svg_scatter;
use erode::{cluster, ClusterConfig, Dataset, Metric};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn main() -> Result<(), erode::Error> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let out = args.first().cloned().unwrap_or_else(|| "moons.svg".into());
    let r: f64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(0.3);

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let noise = Normal::new(0.0, 0.04).unwrap();
    let rows: Vec<[f64; 2]> = (0..1000)
        .map(|i| {
            let t = rng.random_range(0.0..PI);
            let (x, y) = if i % 2 == 0 {
                (t.cos(), t.sin())
            } else {
                (1.0 - t.cos(), 0.5 - t.sin())
            };
            [x + noise.sample(&mut rng), y + noise.sample(&mut rng)]
        })
        .collect();
    let data = Dataset::from_rows(&rows)?;
    let res = cluster(&data, Metric::Euclidean, &ClusterConfig::new(r))?;
    emit_svg_scatter(&data, &res.labeling, &out)?;
    println!(
        "{} clusters, written to {out}",
        res.labeling.cluster_count()
    );
    Ok(())
}
