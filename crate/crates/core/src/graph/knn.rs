use std::cmp::Ordering;

use rayon::prelude::*;

use super::Neighbor;
use crate::dataset::{Dataset, Metric, Space};
use crate::error::{Error, Result};

/// Exactly `k` nearest neighbors per sample, sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct KnnGraph {
    lists: Vec<Vec<Neighbor>>,
    k: usize,
}

impl KnnGraph {
    pub fn from_lists(lists: Vec<Vec<Neighbor>>, k: usize) -> Result<Self> {
        let n = lists.len();
        for (i, list) in lists.iter().enumerate() {
            if list.len() != k {
                return Err(Error::SizeMismatch {
                    what: "k-NN list length",
                    expected: k,
                    actual: list.len(),
                });
            }
            for (pos, e) in list.iter().enumerate() {
                if e.id >= n {
                    return Err(Error::IndexOutOfRange { index: e.id, n });
                }
                if e.id == i {
                    return Err(Error::InvalidData(format!("sample {i} lists itself")));
                }
                if pos > 0 && list[pos - 1].order(e) != Ordering::Less {
                    return Err(Error::InvalidData(format!(
                        "sample {i}: k-NN list is not strictly sorted"
                    )));
                }
            }
            let mut ids: Vec<usize> = list.iter().map(|e| e.id).collect();
            ids.sort_unstable();
            if ids.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidData(format!(
                    "sample {i}: duplicate neighbor"
                )));
            }
        }
        Ok(KnnGraph { lists, k })
    }

    pub(crate) fn from_lists_unchecked(lists: Vec<Vec<Neighbor>>, k: usize) -> Self {
        KnnGraph { lists, k }
    }

    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn neighbors(&self, i: usize) -> &[Neighbor] {
        &self.lists[i]
    }

    pub fn lists(&self) -> &[Vec<Neighbor>] {
        &self.lists
    }
}

pub(crate) fn top_k(space: &Space<'_>, i: usize, k: usize) -> Vec<Neighbor> {
    let mut row: Vec<Neighbor> = (0..space.len())
        .filter(|&j| j != i)
        .map(|j| Neighbor::new(j, space.dist(i, j)))
        .collect();
    if k < row.len() {
        row.select_nth_unstable_by(k, Neighbor::order);
        row.truncate(k);
        row.shrink_to_fit();
    }
    row.sort_unstable_by(Neighbor::order);
    row
}

/// Exact k-NN graph by brute force.
pub fn build_exact_knn(view: &Dataset, metric: Metric, k: usize) -> Result<KnnGraph> {
    let n = view.len();
    check_k(k, n)?;
    let space = Space::new(view, metric)?;
    let lists = (0..n)
        .into_par_iter()
        .map(|i| top_k(&space, i, k))
        .collect();
    Ok(KnnGraph { lists, k })
}

pub(crate) fn check_k(k: usize, n: usize) -> Result<()> {
    if k == 0 || k >= n {
        Err(Error::InvalidParameter(format!(
            "k must satisfy 1 <= k < n (k = {k}, n = {n})"
        )))
    } else {
        Ok(())
    }
}

/// Mean fraction of each exact list recovered by the approximate list.
pub fn graph_recall(approx: &KnnGraph, exact: &KnnGraph) -> Result<f64> {
    if approx.len() != exact.len() {
        return Err(Error::SizeMismatch {
            what: "graph samples",
            expected: exact.len(),
            actual: approx.len(),
        });
    }
    if approx.k != exact.k {
        return Err(Error::SizeMismatch {
            what: "graph k",
            expected: exact.k,
            actual: approx.k,
        });
    }
    if exact.is_empty() || exact.k == 0 {
        return Ok(1.0);
    }
    let hits: usize = approx
        .lists
        .iter()
        .zip(&exact.lists)
        .map(|(a, e)| a.iter().filter(|x| e.iter().any(|y| y.id == x.id)).count())
        .sum();
    Ok(hits as f64 / (exact.len() * exact.k) as f64)
}
