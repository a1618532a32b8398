//! Every stage of the pipeline on a five-point toy set, printed as it goes.
//!
//! ```text
//! cargo run --example walkthrough
//! ```

use erode::{build_exact_rnn, build_reverse, erode, propagate, static_density, Dataset, Metric};

fn main() -> Result<(), erode::Error> {
    let data = Dataset::from_rows(&[[0.0, 0.0], [1.0, 0.0], [0.5, 0.8], [5.0, 5.0], [5.5, 5.0]])?;
    let r = 1.5;

    let rho = static_density(&data, Metric::Euclidean, r)?;
    println!("density within r={r}: {rho:?}");

    let g = build_exact_rnn(&data, Metric::Euclidean, r)?;
    for i in 0..g.len() {
        let row: Vec<String> = g
            .neighbors(i)
            .iter()
            .map(|e| format!("{}@{:.3}", e.id, e.dist))
            .collect();
        println!("  N({i}) = [{}]", row.join(", "));
    }

    let rev = build_reverse(&g);
    let levels = erode(&g, &rev)?;
    for (l, batch) in levels.batches().iter().enumerate() {
        println!("level {}: {batch:?}", l + 1);
    }

    let labels = propagate(&levels, &g)?;
    println!(
        "visit order: {:?}",
        levels.visit_order().collect::<Vec<_>>()
    );
    println!("labels: {:?}", labels.labels());
    println!("founders: {:?}", labels.seeds());
    Ok(())
}
