//! Exact vs NN-Descent graphs on well-separated Gaussian blobs.
//!
//! ```text
//! cargo run --release --example approximate_pipeline -- [n] [dim] [blobs] [radius] [augment_k] [seed]
//! ```
//!
//! Prints the NN-Descent recall against brute force, the cluster counts of
//! both pipelines and how often they agree after optimal label matching.
//! Both pipelines use augmented propagation (top-5 by default, 0 turns it
//! off).

use std::time::Instant;

use erode::{
    build_exact_knn, build_nndescent_knn, cluster, clustering_accuracy, graph_recall,
    ClusterConfig, Dataset, GroundTruth, Metric, NnDescentParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn blobs(n: usize, dim: usize, centers: usize, seed: u64) -> (Dataset, Vec<u32>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mids: Vec<Vec<f64>> = (0..centers)
        .map(|_| (0..dim).map(|_| rng.random_range(-60.0..60.0)).collect())
        .collect();
    let mut rows = Vec::with_capacity(n);
    let mut truth = Vec::with_capacity(n);
    for i in 0..n {
        let c = i % centers;
        let row: Vec<f64> = mids[c]
            .iter()
            .map(|m| m + Distribution::<f64>::sample(&StandardNormal, &mut rng))
            .collect();
        rows.push(row);
        truth.push(c as u32 + 1);
    }
    (Dataset::from_rows(&rows).unwrap(), truth)
}

fn main() -> Result<(), erode::Error> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, default: f64| args.get(i).and_then(|s| s.parse().ok()).unwrap_or(default);
    let n = arg(0, 20_000.0) as usize;
    let dim = arg(1, 16.0) as usize;
    let centers = arg(2, 20.0) as usize;
    let radius = arg(3, 3.0);
    let augment = args
        .get(4)
        .and_then(|s| s.parse::<usize>().ok())
        .or(Some(5))
        .filter(|&k| k > 0);
    let seed = arg(5, 0.0) as u64;

    let (data, truth) = blobs(n, dim, centers, seed);
    let truth = GroundTruth::from_labels(&truth);
    let params = NnDescentParams::with_k(10);

    let t = Instant::now();
    let approx = build_nndescent_knn(&data, Metric::Euclidean, params)?;
    let t_nnd = t.elapsed();
    let t = Instant::now();
    let exact = build_exact_knn(&data, Metric::Euclidean, 10)?;
    let t_bf = t.elapsed();
    println!(
        "recall@10 = {:.4}  (nn-descent {:.2?}, brute force {:.2?})",
        graph_recall(&approx, &exact)?,
        t_nnd,
        t_bf
    );

    let t = Instant::now();
    let mut exact_cfg = ClusterConfig::new(radius);
    exact_cfg.augment_k = augment;
    let exact_run = cluster(&data, Metric::Euclidean, &exact_cfg)?;
    println!(
        "exact:       {} clusters, accuracy {:.4}, mean degree {:.1} ({:.2?})",
        exact_run.labeling.cluster_count(),
        clustering_accuracy(&exact_run.labeling, &truth)?,
        exact_run.graph.edge_count() as f64 / n as f64,
        t.elapsed()
    );
    let t = Instant::now();
    let mut approx_cfg = ClusterConfig::new(radius).nndescent(params);
    approx_cfg.augment_k = augment;
    let approx_run = cluster(&data, Metric::Euclidean, &approx_cfg)?;
    println!(
        "approximate: {} clusters, accuracy {:.4}, mean degree {:.1} ({:.2?})",
        approx_run.labeling.cluster_count(),
        clustering_accuracy(&approx_run.labeling, &truth)?,
        approx_run.graph.edge_count() as f64 / n as f64,
        t.elapsed()
    );
    let agreement = clustering_accuracy(
        &approx_run.labeling,
        &GroundTruth::from_labels(exact_run.labeling.labels()),
    )?;
    println!("agreement = {agreement:.4}");
    Ok(())
}
