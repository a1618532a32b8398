//! Build an r-NN graph once, save it, then erode and propagate from the
//! saved copy without touching the points again.
//!
//! ```text
//! cargo run --example graph_files -- [graph.txt]
//! ```

use erode::graph::{read_graph, write_graph};
use erode::{build_exact_rnn, build_reverse, erode, propagate, Dataset, Metric};

fn main() -> Result<(), erode::Error> {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        std::env::temp_dir()
            .join("erode-graph.txt")
            .to_string_lossy()
            .into_owned()
    });
    let rows: Vec<[f64; 2]> = (0..40)
        .map(|i| {
            let (cx, t) = if i < 20 {
                (0.0, i as f64)
            } else {
                (10.0, (i - 20) as f64)
            };
            [cx + (t * 0.7).cos(), (t * 0.7).sin()]
        })
        .collect();
    let data = Dataset::from_rows(&rows)?;
    let g = build_exact_rnn(&data, Metric::Euclidean, 1.0)?;
    write_graph(&g, &path)?;
    println!(
        "wrote {} samples, {} edges to {path}",
        g.len(),
        g.edge_count()
    );

    let loaded = read_graph(&path)?;
    let levels = erode(&loaded, &build_reverse(&loaded))?;
    let labels = propagate(&levels, &loaded)?;
    println!(
        "levels: {}, clusters: {}",
        levels.max_level(),
        labels.cluster_count()
    );
    println!("labels: {:?}", labels.labels());
    Ok(())
}
