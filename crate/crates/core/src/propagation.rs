//! Label propagation over boundary levels.
//!
//! Samples are visited from the highest boundary level down (ascending id
//! within a level). A sample copies the label of the first already-labeled
//! entry of its sorted neighbor list, i.e. its closest labeled neighbor, or
//! founds a new cluster when none of its neighbors is labeled yet.

use crate::erosion::BoundaryLevels;
use crate::error::{Error, Result};
use crate::graph::RnnGraph;

/// Cluster id per sample: `0` marks an outlier, clusters are `1..=count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling {
    label: Vec<u32>,
    cluster_count: usize,
    seeds: Vec<usize>,
}

impl Labeling {
    /// Builds a labeling from raw labels, compacting the non-zero ids to
    /// `1..=count` in order of first appearance. The seed of each cluster is
    /// its lowest-index member.
    pub fn from_labels(labels: &[u32]) -> Self {
        let order: Vec<usize> = (0..labels.len()).collect();
        Self::from_labels_in_order(labels, &order)
    }

    /// Like [`Labeling::from_labels`], but clusters are numbered and seeded
    /// by the first member met in `visit_order`. With the boundary-level
    /// visit order this recovers the founders of a propagated labeling.
    pub fn from_labels_in_order(labels: &[u32], visit_order: &[usize]) -> Self {
        let mut remap = std::collections::HashMap::new();
        let mut seeds = Vec::new();
        for &i in visit_order {
            let l = labels[i];
            if l != 0 && !remap.contains_key(&l) {
                remap.insert(l, remap.len() as u32 + 1);
                seeds.push(i);
            }
        }
        let label = labels
            .iter()
            .map(|l| if *l == 0 { 0 } else { remap[l] })
            .collect();
        Labeling {
            label,
            cluster_count: seeds.len(),
            seeds,
        }
    }

    pub fn len(&self) -> usize {
        self.label.len()
    }

    pub fn is_empty(&self) -> bool {
        self.label.is_empty()
    }

    pub fn labels(&self) -> &[u32] {
        &self.label
    }

    pub fn label(&self, i: usize) -> u32 {
        self.label[i]
    }

    pub fn cluster_count(&self) -> usize {
        self.cluster_count
    }

    /// `seeds()[c - 1]` is the sample that founded cluster `c`.
    pub fn seeds(&self) -> &[usize] {
        &self.seeds
    }

    pub fn outlier_count(&self) -> usize {
        self.label.iter().filter(|&&l| l == 0).count()
    }

    /// Member count per cluster; index `c - 1` for cluster `c`.
    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.cluster_count];
        for &l in &self.label {
            if l > 0 {
                sizes[l as usize - 1] += 1;
            }
        }
        sizes
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GraphChoice {
    /// Propagate over the same graph that was eroded.
    #[default]
    ErosionGraph,
    /// Propagate over a top-k augmented copy of it.
    AugmentedGraph { k: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PropagationParams {
    pub graph_choice: GraphChoice,
    pub min_cluster_size: usize,
}

impl Default for PropagationParams {
    fn default() -> Self {
        PropagationParams {
            graph_choice: GraphChoice::ErosionGraph,
            min_cluster_size: 1,
        }
    }
}

pub fn propagate(levels: &BoundaryLevels, g: &RnnGraph) -> Result<Labeling> {
    if levels.len() != g.len() {
        return Err(Error::SizeMismatch {
            what: "boundary levels vs graph samples",
            expected: g.len(),
            actual: levels.len(),
        });
    }
    let mut label = vec![0u32; g.len()];
    let mut seeds = Vec::new();
    for i in levels.visit_order() {
        let inherited = g.neighbors(i).iter().map(|e| label[e.id]).find(|&l| l > 0);
        label[i] = match inherited {
            Some(l) => l,
            None => {
                seeds.push(i);
                seeds.len() as u32
            }
        };
    }
    Ok(Labeling {
        label,
        cluster_count: seeds.len(),
        seeds,
    })
}

/// Propagation over a graph produced by [`crate::graph::augment_rnn`].
pub fn propagate_augmented(levels: &BoundaryLevels, g_aug: &RnnGraph) -> Result<Labeling> {
    propagate(levels, g_aug)
}

/// Relabels every member of a cluster smaller than `min_cluster_size` as an
/// outlier and renumbers the surviving clusters in their original order.
pub fn mark_outliers(labeling: &Labeling, min_cluster_size: usize) -> Labeling {
    let sizes = labeling.cluster_sizes();
    let mut remap = vec![0u32; labeling.cluster_count + 1];
    let mut seeds = Vec::new();
    for (c, &size) in sizes.iter().enumerate() {
        if size >= min_cluster_size && size > 0 {
            seeds.push(labeling.seeds[c]);
            remap[c + 1] = seeds.len() as u32;
        }
    }
    Labeling {
        label: labeling.label.iter().map(|&l| remap[l as usize]).collect(),
        cluster_count: seeds.len(),
        seeds,
    }
}
