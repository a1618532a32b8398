//! Accuracy after optimal cluster-to-class matching, error rate and
//! pairwise F1 for a few hand-made predictions.
//!
//! ```text
//! cargo run --example scoring
//! ```

use erode::{clustering_accuracy, error_rate, pairwise_scores, GroundTruth, Labeling};

fn main() -> Result<(), erode::Error> {
    // A negative class id marks a sample that is left out of scoring.
    let truth = GroundTruth::new(vec![1, 1, 1, 1, 2, 2, 2, 3, 3, -1]);
    let cases: [(&str, [u32; 10]); 5] = [
        ("perfect, relabeled", [7, 7, 7, 7, 4, 4, 4, 9, 9, 1]),
        ("one sample moved", [1, 1, 1, 2, 2, 2, 2, 3, 3, 3]),
        ("classes 2 and 3 merged", [1, 1, 1, 1, 2, 2, 2, 2, 2, 2]),
        ("everything split", [1, 2, 3, 4, 5, 6, 7, 8, 9, 10]),
        ("outliers (label 0)", [1, 1, 1, 0, 2, 2, 0, 3, 3, 0]),
    ];
    println!(
        "{:<24} {:>8} {:>6} {:>9} {:>6} {:>6}",
        "prediction", "accuracy", "error", "precision", "recall", "f1"
    );
    for (name, labels) in cases {
        let pred = Labeling::from_labels(&labels);
        let pair = pairwise_scores(&pred, &truth)?;
        println!(
            "{name:<24} {:>8.4} {:>6.4} {:>9.4} {:>6.4} {:>6.4}",
            clustering_accuracy(&pred, &truth)?,
            error_rate(&pred, &truth)?,
            pair.precision,
            pair.recall,
            pair.f1
        );
    }
    Ok(())
}
