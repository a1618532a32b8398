//! Watch the minimum surviving density while a blob with a sparse halo
//! erodes from the outside in.
//!
//! ```text
//! cargo run --example erosion_trace -- [n] [radius] [seed]
//! ```

use erode::{build_exact_rnn, build_reverse, rho_star_trace, Dataset, Metric};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn main() -> Result<(), erode::Error> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: usize = args.first().and_then(|s| s.parse().ok()).unwrap_or(300);
    let r: f64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(0.4);
    let seed: u64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(1);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let core = Normal::new(0.0, 1.0).unwrap();
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        if i % 10 == 0 {
            rows.push([rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)]);
        } else {
            rows.push([core.sample(&mut rng), core.sample(&mut rng)]);
        }
    }
    let data = Dataset::from_rows(&rows)?;
    let g = build_exact_rnn(&data, Metric::Euclidean, r)?;
    let rev = build_reverse(&g);

    println!("level  rho*  batch  mean distance from origin");
    for (l, step) in rho_star_trace(&g, &rev)?.iter().enumerate() {
        let spread: f64 = step
            .batch
            .iter()
            .map(|&i| (rows[i][0].powi(2) + rows[i][1].powi(2)).sqrt())
            .sum::<f64>()
            / step.batch.len() as f64;
        println!(
            "{:>5}  {:>4}  {:>5}  {spread:.2}",
            l + 1,
            step.min_density,
            step.batch.len()
        );
    }
    Ok(())
}
