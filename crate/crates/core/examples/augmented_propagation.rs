//! Plain propagation, top-k augmented propagation and outlier marking on
//! three blobs with a handful of isolated points around them.
//!
//! ```text
//! cargo run --example augmented_propagation -- [radius] [k] [min_cluster_size]
//! ```

use erode::{cluster, clustering_accuracy, ClusterConfig, Dataset, GroundTruth, Metric};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn main() -> Result<(), erode::Error> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let r: f64 = args.first().and_then(|s| s.parse().ok()).unwrap_or(0.5);
    let k: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(5);
    let min_size: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(10);

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let spread = Normal::new(0.0, 0.5).unwrap();
    let (mut rows, mut truth) = (Vec::new(), Vec::new());
    for (c, (cx, cy)) in [(0.0, 0.0), (10.0, 0.0), (5.0, 8.0)]
        .into_iter()
        .enumerate()
    {
        for _ in 0..300 {
            rows.push([cx + spread.sample(&mut rng), cy + spread.sample(&mut rng)]);
            truth.push(c as u32 + 1);
        }
    }
    for i in 0..6 {
        rows.push([-3.0 - i as f64, -3.0 + 0.3 * i as f64]);
        truth.push(1);
    }
    let data = Dataset::from_rows(&rows)?;
    let gt = GroundTruth::from_labels(&truth);

    for (name, cfg) in [
        ("plain", ClusterConfig::new(r)),
        ("augmented", ClusterConfig::new(r).augmented(k)),
        (
            "outliers marked",
            ClusterConfig::new(r).min_cluster_size(min_size),
        ),
    ] {
        let res = cluster(&data, Metric::Euclidean, &cfg)?;
        println!(
            "{name:<16} clusters={:<3} outliers={:<3} accuracy={:.4}",
            res.labeling.cluster_count(),
            res.labeling.outlier_count(),
            clustering_accuracy(&res.labeling, &gt)?
        );
    }
    Ok(())
}
