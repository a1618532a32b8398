//! End-to-end clustering: graph, erosion, optional augmentation,
//! propagation and outlier marking.

use crate::dataset::{Dataset, Metric};
use crate::erosion::{erode, BoundaryLevels};
use crate::error::{check_radius, Error, Result};
use crate::graph::{
    augment_rnn, build_exact_rnn, build_nndescent_knn, build_reverse, prune_knn_to_rnn, KnnGraph,
    NnDescentParams, RnnGraph,
};
use crate::propagation::{mark_outliers, propagate, propagate_augmented, Labeling};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GraphMode {
    Exact,
    NnDescent(NnDescentParams),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterConfig {
    pub radius: f64,
    pub mode: GraphMode,
    /// Propagate over a top-k augmented graph when set.
    pub augment_k: Option<usize>,
    pub min_cluster_size: usize,
}

impl ClusterConfig {
    pub fn new(radius: f64) -> Self {
        ClusterConfig {
            radius,
            mode: GraphMode::Exact,
            augment_k: None,
            min_cluster_size: 1,
        }
    }

    pub fn augmented(mut self, k: usize) -> Self {
        self.augment_k = Some(k);
        self
    }

    pub fn nndescent(mut self, params: NnDescentParams) -> Self {
        self.mode = GraphMode::NnDescent(params);
        self
    }

    pub fn min_cluster_size(mut self, size: usize) -> Self {
        self.min_cluster_size = size;
        self
    }
}

#[derive(Debug, Clone)]
pub struct ClusterResult {
    pub labeling: Labeling,
    pub levels: BoundaryLevels,
    /// The graph that was eroded.
    pub graph: RnnGraph,
    /// The NN-Descent graph in approximate mode.
    pub knn: Option<KnnGraph>,
}

impl ClusterResult {
    /// Static density of each sample in the eroded graph.
    pub fn density(&self) -> &[u32] {
        self.levels.initial_density()
    }
}

/// Builds the neighbor graph the configuration asks for.
pub fn build_graph(
    view: &Dataset,
    metric: Metric,
    config: &ClusterConfig,
) -> Result<(RnnGraph, Option<KnnGraph>)> {
    check_radius(config.radius)?;
    match config.mode {
        GraphMode::Exact => Ok((build_exact_rnn(view, metric, config.radius)?, None)),
        GraphMode::NnDescent(params) => {
            if let Some(k) = config.augment_k {
                if k > params.k {
                    return Err(Error::InvalidParameter(format!(
                        "augmentation k ({k}) exceeds the NN-Descent graph k ({})",
                        params.k
                    )));
                }
            }
            let knn = build_nndescent_knn(view, metric, params)?;
            Ok((prune_knn_to_rnn(&knn, config.radius)?, Some(knn)))
        }
    }
}

pub fn cluster(view: &Dataset, metric: Metric, config: &ClusterConfig) -> Result<ClusterResult> {
    let (graph, knn) = build_graph(view, metric, config)?;
    let levels = erode(&graph, &build_reverse(&graph))?;
    let labeling = match config.augment_k {
        Some(k) => {
            let aug = augment_rnn(&graph, view, metric, k, knn.as_ref())?;
            propagate_augmented(&levels, &aug)?
        }
        None => propagate(&levels, &graph)?,
    };
    let labeling = mark_outliers(&labeling, config.min_cluster_size);
    Ok(ClusterResult {
        labeling,
        levels,
        graph,
        knn,
    })
}
