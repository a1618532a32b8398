//! Neighbor graphs: exact r-NN, NN-Descent k-NN, reverse graphs and the
//! top-k augmentation used by label propagation.

mod io;
mod knn;
mod nndescent;

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::dataset::{Dataset, Metric, Space};
use crate::error::{check_radius, Error, Result};

pub use io::{read_graph, write_graph, GRAPH_FORMAT_HEADER};
pub use knn::{build_exact_knn, graph_recall, KnnGraph};
pub use nndescent::{build_nndescent_knn, NnDescentParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub id: usize,
    pub dist: f64,
}

impl Neighbor {
    pub fn new(id: usize, dist: f64) -> Self {
        Neighbor { id, dist }
    }

    /// Ascending distance, ties by ascending id.
    #[inline]
    pub fn order(&self, other: &Neighbor) -> Ordering {
        self.dist
            .total_cmp(&other.dist)
            .then_with(|| self.id.cmp(&other.id))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphSource {
    /// Every pair within the radius, found by exhaustive search.
    Exact,
    /// k-NN lists pruned to the radius; may be asymmetric and incomplete.
    Approximate,
    /// Short lists replaced by top-k lists; entries may lie beyond the radius.
    Augmented,
}

impl GraphSource {
    pub fn name(self) -> &'static str {
        match self {
            GraphSource::Exact => "exact",
            GraphSource::Approximate => "approximate",
            GraphSource::Augmented => "augmented",
        }
    }
}

impl std::str::FromStr for GraphSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(GraphSource::Exact),
            "approximate" => Ok(GraphSource::Approximate),
            "augmented" => Ok(GraphSource::Augmented),
            other => Err(Error::InvalidParameter(format!(
                "unknown graph source '{other}'"
            ))),
        }
    }
}

/// Per-sample neighbor lists within a radius, each sorted ascending by
/// distance with ties broken by id.
#[derive(Debug, Clone, PartialEq)]
pub struct RnnGraph {
    lists: Vec<Vec<Neighbor>>,
    radius: f64,
    source: GraphSource,
}

impl RnnGraph {
    /// Wraps prebuilt lists after checking the graph invariants: ids in
    /// range, no self loops or duplicates, sorted order, and (unless the
    /// graph is augmented) every distance within `radius`.
    pub fn from_lists(lists: Vec<Vec<Neighbor>>, radius: f64, source: GraphSource) -> Result<Self> {
        check_radius(radius)?;
        let n = lists.len();
        for (i, list) in lists.iter().enumerate() {
            for (pos, e) in list.iter().enumerate() {
                if e.id >= n {
                    return Err(Error::IndexOutOfRange { index: e.id, n });
                }
                if e.id == i {
                    return Err(Error::InvalidData(format!("sample {i} lists itself")));
                }
                if !e.dist.is_finite() || e.dist < 0.0 {
                    return Err(Error::InvalidData(format!(
                        "sample {i}: invalid distance {} to {}",
                        e.dist, e.id
                    )));
                }
                if source != GraphSource::Augmented && e.dist > radius {
                    return Err(Error::InvalidData(format!(
                        "sample {i}: neighbor {} at {} lies beyond radius {radius}",
                        e.id, e.dist
                    )));
                }
                if pos > 0 && list[pos - 1].order(e) != Ordering::Less {
                    return Err(Error::InvalidData(format!(
                        "sample {i}: neighbor list is not strictly sorted"
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
        Ok(RnnGraph {
            lists,
            radius,
            source,
        })
    }

    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn source(&self) -> GraphSource {
        self.source
    }

    #[inline]
    pub fn neighbors(&self, i: usize) -> &[Neighbor] {
        &self.lists[i]
    }

    pub fn lists(&self) -> &[Vec<Neighbor>] {
        &self.lists
    }

    pub fn edge_count(&self) -> usize {
        self.lists.iter().map(Vec::len).sum()
    }

    /// List lengths, i.e. the static density of each sample.
    pub fn degrees(&self) -> Vec<u32> {
        self.lists.iter().map(|l| l.len() as u32).collect()
    }

    pub fn into_lists(self) -> Vec<Vec<Neighbor>> {
        self.lists
    }
}

/// For each sample `i`, the samples whose lists contain `i`, ascending.
/// Stored as one flat id array with per-sample offsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReverseGraph {
    offsets: Vec<usize>,
    ids: Vec<u32>,
}

impl ReverseGraph {
    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn referrers(&self, i: usize) -> &[u32] {
        &self.ids[self.offsets[i]..self.offsets[i + 1]]
    }

    /// True when this is exactly the reverse of `g`.
    pub fn is_reverse_of(&self, g: &RnnGraph) -> bool {
        *self == build_reverse(g)
    }
}

/// All pairs within `r`, by exhaustive `O(d n^2)` search.
pub fn build_exact_rnn(view: &Dataset, metric: Metric, r: f64) -> Result<RnnGraph> {
    check_radius(r)?;
    let space = Space::new(view, metric)?;
    let n = space.len();
    let lists = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut row: Vec<Neighbor> = (0..n)
                .filter(|&j| j != i)
                .filter_map(|j| {
                    let d = space.dist(i, j);
                    (d <= r).then_some(Neighbor::new(j, d))
                })
                .collect();
            row.sort_unstable_by(Neighbor::order);
            row
        })
        .collect();
    Ok(RnnGraph {
        lists,
        radius: r,
        source: GraphSource::Exact,
    })
}

/// Keeps the entries of each k-NN list that lie within `r`, preserving order.
pub fn prune_knn_to_rnn(knn: &KnnGraph, r: f64) -> Result<RnnGraph> {
    check_radius(r)?;
    let lists = knn
        .lists()
        .iter()
        .map(|list| list.iter().copied().take_while(|e| e.dist <= r).collect())
        .collect();
    Ok(RnnGraph {
        lists,
        radius: r,
        source: GraphSource::Approximate,
    })
}

pub fn build_reverse(g: &RnnGraph) -> ReverseGraph {
    let n = g.len();
    assert!(n <= u32::MAX as usize, "reverse graph ids are 32-bit");
    let mut offsets = vec![0usize; n + 1];
    for list in &g.lists {
        for e in list {
            offsets[e.id + 1] += 1;
        }
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    let mut fill = offsets[..n].to_vec();
    let mut ids = vec![0u32; offsets[n]];
    // Visiting owners in ascending order leaves each reverse list sorted.
    for (owner, list) in g.lists.iter().enumerate() {
        for e in list {
            ids[fill[e.id]] = owner as u32;
            fill[e.id] += 1;
        }
    }
    ReverseGraph { offsets, ids }
}

/// Replaces every list shorter than `k` with the sample's top-`k` nearest
/// neighbors. With `knn_source` the top-`k` lists are read from that graph,
/// otherwise they are found by brute force.
pub fn augment_rnn(
    g: &RnnGraph,
    view: &Dataset,
    metric: Metric,
    k: usize,
    knn_source: Option<&KnnGraph>,
) -> Result<RnnGraph> {
    let n = g.len();
    if view.len() != n {
        return Err(Error::SizeMismatch {
            what: "dataset vs graph samples",
            expected: n,
            actual: view.len(),
        });
    }
    if k == 0 || k >= n {
        return Err(Error::InvalidParameter(format!(
            "augmentation k must satisfy 1 <= k < n (k = {k}, n = {n})"
        )));
    }
    if let Some(knn) = knn_source {
        if knn.len() != n {
            return Err(Error::SizeMismatch {
                what: "k-NN graph samples",
                expected: n,
                actual: knn.len(),
            });
        }
        if knn.k() < k {
            return Err(Error::InvalidParameter(format!(
                "k-NN source has k = {}, augmentation needs at least {k}",
                knn.k()
            )));
        }
    }
    let space = Space::new(view, metric)?;
    let lists = g
        .lists
        .par_iter()
        .enumerate()
        .map(|(i, list)| {
            if list.len() >= k {
                list.clone()
            } else if let Some(knn) = knn_source {
                knn.neighbors(i)[..k].to_vec()
            } else {
                knn::top_k(&space, i, k)
            }
        })
        .collect();
    Ok(RnnGraph {
        lists,
        radius: g.radius,
        source: GraphSource::Augmented,
    })
}
