//! External clustering metrics: matched accuracy, pairwise F1, error rate.
//!
//! Ground-truth entries with a negative class id are unscored and left out
//! of every metric. Predicted outliers (label 0) count as singleton
//! clusters.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::propagation::Labeling;

/// Reference class per sample; `None` marks an unscored sample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTruth {
    label: Vec<Option<i64>>,
}

impl GroundTruth {
    /// Negative ids are treated as unscored.
    pub fn new(ids: Vec<i64>) -> Self {
        GroundTruth {
            label: ids.into_iter().map(|v| (v >= 0).then_some(v)).collect(),
        }
    }

    pub fn from_options(label: Vec<Option<i64>>) -> Self {
        GroundTruth { label }
    }

    pub fn from_labels(labels: &[u32]) -> Self {
        GroundTruth {
            label: labels.iter().map(|&l| Some(l as i64)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.label.len()
    }

    pub fn is_empty(&self) -> bool {
        self.label.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<i64> {
        self.label[i]
    }

    pub fn scored_count(&self) -> usize {
        self.label.iter().filter(|l| l.is_some()).count()
    }

    pub fn class_count(&self) -> usize {
        let mut ids: Vec<i64> = self.label.iter().flatten().copied().collect();
        ids.sort_unstable();
        ids.dedup();
        ids.len()
    }
}

/// Counts of scored samples per (predicted cluster, true class).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    counts: Vec<Vec<u64>>,
    total: u64,
}

impl ContingencyTable {
    pub fn new(pred: &Labeling, truth: &GroundTruth) -> Result<Self> {
        if pred.len() != truth.len() {
            return Err(Error::SizeMismatch {
                what: "ground-truth labels",
                expected: pred.len(),
                actual: truth.len(),
            });
        }
        let mut rows: HashMap<(u32, usize), usize> = HashMap::new();
        let mut cols: HashMap<i64, usize> = HashMap::new();
        let mut cells: Vec<(usize, usize)> = Vec::new();
        for (i, &p) in pred.labels().iter().enumerate() {
            let Some(t) = truth.get(i) else { continue };
            // Each outlier is its own cluster.
            let row_key = if p == 0 { (0, i) } else { (p, 0) };
            let next = rows.len();
            let r = *rows.entry(row_key).or_insert(next);
            let next = cols.len();
            let c = *cols.entry(t).or_insert(next);
            cells.push((r, c));
        }
        if cells.is_empty() {
            return Err(Error::InvalidData("no scored samples to evaluate".into()));
        }
        let mut counts = vec![vec![0u64; cols.len()]; rows.len()];
        for (r, c) in cells {
            counts[r][c] += 1;
        }
        let total = counts.iter().flatten().sum();
        Ok(ContingencyTable { counts, total })
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Largest number of samples covered by a one-to-one matching of
    /// predicted clusters to true classes.
    pub fn best_matching(&self) -> u64 {
        max_weight_matching(&self.counts)
    }
}

/// Maximum total weight of a one-to-one row/column matching, by the
/// Hungarian method on the (implicitly zero-padded) weight matrix.
pub fn max_weight_matching(weights: &[Vec<u64>]) -> u64 {
    let rows = weights.len();
    let cols = weights.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return 0;
    }
    // The solver wants rows <= cols.
    let transposed;
    let w: &[Vec<u64>] = if rows > cols {
        transposed = (0..cols)
            .map(|c| (0..rows).map(|r| weights[r][c]).collect())
            .collect::<Vec<Vec<u64>>>();
        &transposed
    } else {
        weights
    };
    let (n, m) = (w.len(), w[0].len());
    let max = w.iter().flatten().copied().max().unwrap_or(0) as i64;
    let cost = |i: usize, j: usize| max - w[i][j] as i64;

    const INF: i64 = i64::MAX / 4;
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; m + 1];
    let mut owner = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for i in 1..=n {
        owner[0] = i;
        let mut j0 = 0;
        let mut minv = vec![INF; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = INF;
            let mut j1 = 0;
            for j in 1..=m {
                if !used[j] {
                    let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    (1..=m)
        .filter(|&j| owner[j] != 0)
        .map(|j| w[owner[j] - 1][j - 1])
        .sum()
}

/// Fraction of scored samples correctly labeled under the best one-to-one
/// matching of predicted clusters to true classes.
pub fn clustering_accuracy(pred: &Labeling, truth: &GroundTruth) -> Result<f64> {
    let table = ContingencyTable::new(pred, truth)?;
    Ok(table.best_matching() as f64 / table.total() as f64)
}

pub fn error_rate(pred: &Labeling, truth: &GroundTruth) -> Result<f64> {
    clustering_accuracy(pred, truth).map(|a| 1.0 - a)
}

/// Pair-level precision, recall and their harmonic mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairScores {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[inline]
fn pairs(k: u64) -> u128 {
    let k = k as u128;
    k * k.saturating_sub(1) / 2
}

pub fn pairwise_scores(pred: &Labeling, truth: &GroundTruth) -> Result<PairScores> {
    let table = ContingencyTable::new(pred, truth)?;
    if table.total() < 2 {
        return Err(Error::InvalidData(
            "pairwise F1 needs at least 2 scored samples".into(),
        ));
    }
    let counts = table.counts();
    let both: u128 = counts.iter().flatten().map(|&c| pairs(c)).sum();
    let pred_pairs: u128 = counts.iter().map(|row| pairs(row.iter().sum())).sum();
    let cols = counts[0].len();
    let truth_pairs: u128 = (0..cols)
        .map(|c| pairs(counts.iter().map(|row| row[c]).sum()))
        .sum();

    let scores = match (pred_pairs, truth_pairs) {
        (0, 0) => PairScores {
            precision: 1.0,
            recall: 1.0,
            f1: 1.0,
        },
        (0, _) | (_, 0) => PairScores {
            precision: 0.0,
            recall: 0.0,
            f1: 0.0,
        },
        _ => {
            let precision = both as f64 / pred_pairs as f64;
            let recall = both as f64 / truth_pairs as f64;
            let f1 = if both == 0 {
                0.0
            } else {
                2.0 * precision * recall / (precision + recall)
            };
            PairScores {
                precision,
                recall,
                f1,
            }
        }
    };
    Ok(scores)
}

pub fn pairwise_f1(pred: &Labeling, truth: &GroundTruth) -> Result<f64> {
    pairwise_scores(pred, truth).map(|s| s.f1)
}
