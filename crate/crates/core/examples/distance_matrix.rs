//! Clustering from a precomputed distance matrix: words grouped by edit
//! distance, with no coordinates anywhere.
//!
//! ```text
//! cargo run --example distance_matrix
//! ```

use erode::{cluster, ClusterConfig, Dataset, Metric};

fn edit_distance(a: &str, b: &str) -> usize {
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    for (i, ca) in a.chars().enumerate() {
        let mut row = vec![i + 1; b.len() + 1];
        for (j, &cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            row[j + 1] = sub.min(prev[j + 1] + 1).min(row[j] + 1);
        }
        prev = row;
    }
    prev[b.len()]
}

fn main() -> Result<(), erode::Error> {
    let words = [
        "cluster",
        "clusters",
        "clustered",
        "bluster",
        "fluster",
        "erosion",
        "erosions",
        "eroding",
        "corrosion",
        "boundary",
        "boundaries",
        "bounding",
        "quartz",
    ];
    let n = words.len();
    let mut d = Vec::with_capacity(n * n);
    for a in &words {
        for b in &words {
            d.push(edit_distance(a, b) as f64);
        }
    }
    let data = Dataset::from_distance_matrix(d, n)?;
    let res = cluster(&data, Metric::default_for(&data), &ClusterConfig::new(3.0))?;
    for c in 1..=res.labeling.cluster_count() as u32 {
        let members: Vec<&str> = (0..n)
            .filter(|&i| res.labeling.label(i) == c)
            .map(|i| words[i])
            .collect();
        println!("cluster {c}: {}", members.join(" "));
    }
    Ok(())
}
