//! NN-Descent recall against brute-force k-NN for a few list sizes, and the
//! r-NN graph obtained by pruning the approximate lists.
//!
//! ```text
//! cargo run --release --example nndescent_graph -- [n] [dim] [radius]
//! ```

use std::time::Instant;

use erode::{
    build_exact_knn, build_exact_rnn, build_nndescent_knn, graph_recall, prune_knn_to_rnn, Dataset,
    Metric, NnDescentParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), erode::Error> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: usize = args.first().and_then(|s| s.parse().ok()).unwrap_or(3000);
    let dim: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(8);
    let r: f64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(0.5);

    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..dim).map(|_| rng.random_range(0.0..1.0)).collect())
        .collect();
    let data = Dataset::from_rows(&rows)?;
    let metric = Metric::Euclidean;

    for k in [5, 10, 20] {
        let t = Instant::now();
        let approx = build_nndescent_knn(&data, metric, NnDescentParams::with_k(k))?;
        let took = t.elapsed();
        let exact = build_exact_knn(&data, metric, k)?;
        println!(
            "k={k:<3} recall={:.4} time={took:.2?}",
            graph_recall(&approx, &exact)?
        );
    }

    let approx = build_nndescent_knn(&data, metric, NnDescentParams::with_k(20))?;
    let pruned = prune_knn_to_rnn(&approx, r)?;
    let exact = build_exact_rnn(&data, metric, r)?;
    println!(
        "r={r}: exact edges={} pruned edges={} (lists capped at k=20)",
        exact.edge_count(),
        pruned.edge_count()
    );
    Ok(())
}
