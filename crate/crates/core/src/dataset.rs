//! Sample storage, distance evaluation and static neighborhood density.
//!
//! A [`Dataset`] is either an `n x d` point matrix or a precomputed `n x n`
//! distance matrix. Both are read through the same `(i, j) -> distance`
//! interface once paired with a [`Metric`] in a [`Space`].

use rayon::prelude::*;

use crate::error::{check_radius, Error, Result};

/// Row-major `n x d` matrix of finite reals.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    data: Vec<f64>,
    dim: usize,
    norms: Vec<f64>,
}

/// Symmetric `n x n` matrix of non-negative distances with a zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    data: Vec<f64>,
    n: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Dataset {
    Points(PointSet),
    Precomputed(DistanceMatrix),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    Euclidean,
    /// `1 - cos(a, b)`, clamped at zero.
    Cosine,
    Precomputed,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Euclidean => "euclidean",
            Metric::Cosine => "cosine",
            Metric::Precomputed => "precomputed",
        }
    }

    /// The metric a dataset is read with when the caller has no preference.
    pub fn default_for(data: &Dataset) -> Metric {
        match data {
            Dataset::Points(_) => Metric::Euclidean,
            Dataset::Precomputed(_) => Metric::Precomputed,
        }
    }
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "euclidean" | "l2" => Ok(Metric::Euclidean),
            "cosine" | "cosine-distance" => Ok(Metric::Cosine),
            "precomputed" => Ok(Metric::Precomputed),
            other => Err(Error::InvalidParameter(format!("unknown metric '{other}'"))),
        }
    }
}

impl PointSet {
    pub fn new(data: Vec<f64>, dim: usize) -> Result<Self> {
        if dim == 0 || data.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if !data.len().is_multiple_of(dim) {
            return Err(Error::InvalidData(format!(
                "{} values do not form rows of dimension {dim}",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidData(format!(
                "non-finite value at row {}, column {}",
                pos / dim,
                pos % dim
            )));
        }
        let norms = data
            .chunks_exact(dim)
            .map(|row| row.iter().map(|v| v * v).sum::<f64>().sqrt())
            .collect();
        Ok(PointSet { data, dim, norms })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows
            .first()
            .map(|r| r.as_ref().len())
            .ok_or(Error::EmptyDataset)?;
        let mut data = Vec::with_capacity(rows.len() * dim);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::InvalidData(format!(
                    "row {i} has {} columns, expected {dim}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        PointSet::new(data, dim)
    }

    pub fn len(&self) -> usize {
        self.norms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.norms.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    /// Rescales every column to `[0, 1]`. Constant columns become zero.
    pub fn min_max_normalized(&self) -> PointSet {
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for row in self.rows() {
            for (c, &v) in row.iter().enumerate() {
                lo[c] = lo[c].min(v);
                hi[c] = hi[c].max(v);
            }
        }
        let data = self
            .data
            .iter()
            .enumerate()
            .map(|(k, &v)| {
                let c = k % self.dim;
                let span = hi[c] - lo[c];
                if span > 0.0 {
                    (v - lo[c]) / span
                } else {
                    0.0
                }
            })
            .collect();
        PointSet::new(data, self.dim).expect("normalized values are finite")
    }
}

impl DistanceMatrix {
    /// Validates and wraps a row-major `n x n` matrix. Requires exact
    /// symmetry and a zero diagonal; loaders that tolerate rounding noise
    /// clean the matrix before calling this.
    pub fn new(data: Vec<f64>, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyDataset);
        }
        if data.len() != n * n {
            return Err(Error::SizeMismatch {
                what: "distance matrix entries",
                expected: n * n,
                actual: data.len(),
            });
        }
        for i in 0..n {
            if data[i * n + i] != 0.0 {
                return Err(Error::InvalidData(format!(
                    "diagonal entry ({i},{i}) is {}, expected 0",
                    data[i * n + i]
                )));
            }
            for j in 0..n {
                let v = data[i * n + j];
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidData(format!(
                        "entry ({i},{j}) = {v} is not a finite non-negative distance"
                    )));
                }
                if j > i && v != data[j * n + i] {
                    return Err(Error::InvalidData(format!(
                        "matrix is not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(DistanceMatrix { data, n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }
}

impl Dataset {
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        PointSet::from_rows(rows).map(Dataset::Points)
    }

    pub fn from_distance_matrix(data: Vec<f64>, n: usize) -> Result<Self> {
        DistanceMatrix::new(data, n).map(Dataset::Precomputed)
    }

    pub fn len(&self) -> usize {
        match self {
            Dataset::Points(p) => p.len(),
            Dataset::Precomputed(m) => m.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Dimensionality in points mode, `None` for a distance matrix.
    pub fn dim(&self) -> Option<usize> {
        match self {
            Dataset::Points(p) => Some(p.dim()),
            Dataset::Precomputed(_) => None,
        }
    }

    pub fn points(&self) -> Option<&PointSet> {
        match self {
            Dataset::Points(p) => Some(p),
            Dataset::Precomputed(_) => None,
        }
    }

    fn mode_name(&self) -> &'static str {
        match self {
            Dataset::Points(_) => "points",
            Dataset::Precomputed(_) => "precomputed",
        }
    }
}

/// A dataset paired with a metric that has been checked to apply to it.
#[derive(Debug, Clone, Copy)]
pub struct Space<'a> {
    data: &'a Dataset,
    metric: Metric,
}

impl<'a> Space<'a> {
    pub fn new(data: &'a Dataset, metric: Metric) -> Result<Self> {
        match (data, metric) {
            (Dataset::Points(p), Metric::Cosine) => {
                if let Some(i) = p.norms.iter().position(|&nrm| nrm == 0.0) {
                    return Err(Error::InvalidData(format!(
                        "sample {i} has zero norm; cosine distance is undefined"
                    )));
                }
            }
            (Dataset::Points(_), Metric::Euclidean)
            | (Dataset::Precomputed(_), Metric::Precomputed) => {}
            _ => {
                return Err(Error::MetricMismatch {
                    metric: metric.name(),
                    mode: data.mode_name(),
                })
            }
        }
        Ok(Space { data, metric })
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn dataset(&self) -> &'a Dataset {
        self.data
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    /// Distance without bounds checks beyond slice indexing.
    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 0.0;
        }
        match self.data {
            Dataset::Points(p) => match self.metric {
                Metric::Cosine => {
                    let dot: f64 = p.row(i).iter().zip(p.row(j)).map(|(a, b)| a * b).sum();
                    (1.0 - dot / (p.norms[i] * p.norms[j])).max(0.0)
                }
                _ => euclidean(p.row(i), p.row(j)),
            },
            Dataset::Precomputed(m) => m.get(i, j),
        }
    }

    pub fn checked_dist(&self, i: usize, j: usize) -> Result<f64> {
        let n = self.len();
        for index in [i, j] {
            if index >= n {
                return Err(Error::IndexOutOfRange { index, n });
            }
        }
        Ok(self.dist(i, j))
    }
}

#[inline]
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Distance between samples `i` and `j` under `metric`.
pub fn distance(view: &Dataset, metric: Metric, i: usize, j: usize) -> Result<f64> {
    Space::new(view, metric)?.checked_dist(i, j)
}

/// Number of other samples within distance `r` (inclusive) of each sample.
pub fn static_density(view: &Dataset, metric: Metric, r: f64) -> Result<Vec<u32>> {
    check_radius(r)?;
    let space = Space::new(view, metric)?;
    let n = space.len();
    Ok((0..n)
        .into_par_iter()
        .map(|i| (0..n).filter(|&j| j != i && space.dist(i, j) <= r).count() as u32)
        .collect())
}
