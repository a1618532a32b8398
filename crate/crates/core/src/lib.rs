//! Density-based clustering by boundary erosion.
//!
//! Samples are linked to every neighbor within a radius `r`. Erosion then
//! repeatedly removes the samples with the fewest surviving neighbors,
//! giving each removal batch the next *boundary level*: sparse borders
//! erode first and cluster cores last. Clusters are rebuilt by visiting
//! samples from the highest level down, each copying the label of its
//! closest already-labeled neighbor or founding a new cluster.
//!
//! ```
//! use erode::{cluster, ClusterConfig, Dataset, Metric};
//!
//! let data = Dataset::from_rows(&[[0.0, 0.0], [1.0, 0.0], [0.5, 0.8], [5.0, 5.0], [5.5, 5.0]])?;
//! let result = cluster(&data, Metric::Euclidean, &ClusterConfig::new(1.5))?;
//! assert_eq!(result.labeling.labels(), &[1, 1, 1, 2, 2]);
//! assert_eq!(result.levels.levels(), &[2, 2, 2, 1, 1]);
//! # Ok::<(), erode::Error>(())
//! ```
//!
//! Large inputs can swap the exact `O(d n^2)` graph for an NN-Descent k-NN
//! graph pruned to the radius; see [`ClusterConfig::nndescent`]. The
//! runnable programs under `examples/` walk through each stage.

pub mod cli;
pub mod dataset;
pub mod erosion;
mod error;
pub mod eval;
pub mod graph;
pub mod io;
pub mod pipeline;
pub mod plot;
pub mod propagation;

pub use dataset::{distance, static_density, Dataset, DistanceMatrix, Metric, PointSet, Space};
pub use erosion::{erode, rho_star_trace, BoundaryLevels, ErosionState, ErosionStep};
pub use error::{Error, Result};
pub use eval::{clustering_accuracy, error_rate, pairwise_f1, pairwise_scores, GroundTruth};
pub use graph::{
    augment_rnn, build_exact_knn, build_exact_rnn, build_nndescent_knn, build_reverse,
    graph_recall, prune_knn_to_rnn, GraphSource, KnnGraph, Neighbor, NnDescentParams, ReverseGraph,
    RnnGraph,
};
pub use pipeline::{cluster, ClusterConfig, ClusterResult, GraphMode};
pub use propagation::{
    mark_outliers, propagate, propagate_augmented, GraphChoice, Labeling, PropagationParams,
};
