//! Boundary erosion.
//!
//! Every sample starts with a dynamic density equal to the length of its
//! neighbor list. Each step removes *all* surviving samples that share the
//! current minimum dynamic density as one batch, gives them the next
//! boundary level, and then decrements the dynamic density of every
//! surviving sample that listed a removed one. Batches are extracted in full
//! before any decrement is applied, so updates caused by a batch can never
//! split it.
//!
//! The queue is a bucket array indexed by density with lazy invalidation: a
//! decremented sample is pushed into its new bucket and outdated entries are
//! dropped when their bucket is drained. Every decrement lowers a density by
//! one, so the cursor over buckets moves at most once per edge and a full
//! run is linear in the size of the graph.

use crate::error::{Error, Result};
use crate::graph::{ReverseGraph, RnnGraph};

/// Per-sample erosion order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryLevels {
    level: Vec<u32>,
    batches: Vec<Vec<usize>>,
    initial_density: Vec<u32>,
}

impl BoundaryLevels {
    /// Rebuilds levels from a per-sample level vector, e.g. one read back
    /// from a result file. Levels must cover `1..=max` without gaps.
    pub fn from_levels(level: Vec<u32>, initial_density: Vec<u32>) -> Result<Self> {
        if level.len() != initial_density.len() {
            return Err(Error::SizeMismatch {
                what: "initial densities",
                expected: level.len(),
                actual: initial_density.len(),
            });
        }
        let max = level.iter().copied().max().unwrap_or(0) as usize;
        let mut batches = vec![Vec::new(); max];
        for (i, &l) in level.iter().enumerate() {
            if l == 0 {
                return Err(Error::InvalidData(format!("sample {i} has level 0")));
            }
            batches[l as usize - 1].push(i);
        }
        if let Some(gap) = batches.iter().position(Vec::is_empty) {
            return Err(Error::InvalidData(format!(
                "no sample has level {}",
                gap + 1
            )));
        }
        Ok(BoundaryLevels {
            level,
            batches,
            initial_density,
        })
    }

    pub fn len(&self) -> usize {
        self.level.len()
    }

    pub fn is_empty(&self) -> bool {
        self.level.is_empty()
    }

    /// Level of every sample, `1..=max_level`.
    pub fn levels(&self) -> &[u32] {
        &self.level
    }

    pub fn level(&self, i: usize) -> u32 {
        self.level[i]
    }

    /// `batches()[l - 1]` holds the samples of level `l`, ascending by id.
    pub fn batches(&self) -> &[Vec<usize>] {
        &self.batches
    }

    pub fn max_level(&self) -> u32 {
        self.batches.len() as u32
    }

    /// Neighbor-list length of each sample before erosion began.
    pub fn initial_density(&self) -> &[u32] {
        &self.initial_density
    }

    /// Samples ordered by descending level, ascending id within a level.
    pub fn visit_order(&self) -> impl Iterator<Item = usize> + '_ {
        self.batches.iter().rev().flat_map(|b| b.iter().copied())
    }
}

const GONE: u32 = u32::MAX;

/// The surviving set together with its dynamic densities.
#[derive(Debug, Clone)]
pub struct ErosionState<'g> {
    graph: &'g RnnGraph,
    reverse: &'g ReverseGraph,
    buckets: Vec<Vec<u32>>,
    /// No bucket below this one holds a live entry.
    cursor: usize,
    /// Dynamic density, or `GONE` once eroded.
    density: Vec<u32>,
    remaining: usize,
}

impl<'g> ErosionState<'g> {
    pub fn new(graph: &'g RnnGraph, reverse: &'g ReverseGraph) -> Result<Self> {
        let n = graph.len();
        if reverse.len() != n {
            return Err(Error::SizeMismatch {
                what: "reverse graph samples",
                expected: n,
                actual: reverse.len(),
            });
        }
        if n > u32::MAX as usize {
            return Err(Error::InvalidParameter(
                "erosion supports at most 2^32 samples".into(),
            ));
        }
        debug_assert!(
            reverse.is_reverse_of(graph),
            "reverse graph does not match graph"
        );
        let density = graph.degrees();
        let top = density.iter().copied().max().unwrap_or(0) as usize;
        let mut buckets = vec![Vec::new(); top + 1];
        for (i, &d) in density.iter().enumerate() {
            buckets[d as usize].push(i as u32);
        }
        Ok(ErosionState {
            graph,
            reverse,
            buckets,
            cursor: 0,
            density,
            remaining: n,
        })
    }

    pub fn remaining(&self) -> usize {
        self.remaining
    }

    pub fn is_alive(&self, i: usize) -> bool {
        self.density[i] != GONE
    }

    /// Current dynamic density of every sample still in the surviving set.
    pub fn density(&self, i: usize) -> Option<u32> {
        let d = self.density[i];
        (d != GONE).then_some(d)
    }

    pub fn densities(&self) -> Vec<Option<u32>> {
        (0..self.density.len()).map(|i| self.density(i)).collect()
    }

    #[inline]
    fn is_current(&self, id: u32, density: usize) -> bool {
        self.density[id as usize] as usize == density
    }

    /// Removes the next batch and applies its density updates. Returns the
    /// batch (ascending ids) and its shared dynamic density.
    pub fn pop_batch(&mut self) -> Option<(Vec<usize>, u32)> {
        if self.remaining == 0 {
            return None;
        }
        let (min, mut batch) = loop {
            let m = self.cursor;
            let drained = std::mem::take(&mut self.buckets[m]);
            let batch: Vec<usize> = drained
                .into_iter()
                .filter(|&i| self.is_current(i, m))
                .map(|i| i as usize)
                .collect();
            if !batch.is_empty() {
                break (m, batch);
            }
            self.cursor += 1;
        };
        batch.sort_unstable();

        for &i in &batch {
            self.density[i] = GONE;
        }
        self.remaining -= batch.len();
        for &i in &batch {
            for &j in self.reverse.referrers(i) {
                let slot = &mut self.density[j as usize];
                if *slot != GONE {
                    *slot -= 1;
                    let d = *slot as usize;
                    self.buckets[d].push(j);
                    self.cursor = self.cursor.min(d);
                }
            }
        }
        Some((batch, min as u32))
    }

    pub fn graph(&self) -> &'g RnnGraph {
        self.graph
    }
}

/// Erodes the whole graph and returns each sample's boundary level.
pub fn erode(g: &RnnGraph, rev: &ReverseGraph) -> Result<BoundaryLevels> {
    let mut state = ErosionState::new(g, rev)?;
    let mut level = vec![0u32; g.len()];
    let mut batches = Vec::new();
    while let Some((batch, _)) = state.pop_batch() {
        let l = batches.len() as u32 + 1;
        for &i in &batch {
            level[i] = l;
        }
        batches.push(batch);
    }
    Ok(BoundaryLevels {
        level,
        batches,
        initial_density: g.degrees(),
    })
}

/// One erosion step as seen from outside the queue.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErosionStep {
    pub batch: Vec<usize>,
    pub min_density: u32,
    /// Dynamic densities just before this batch was removed; `None` for
    /// samples eroded earlier.
    pub densities: Vec<Option<u32>>,
}

/// Same loop as [`erode`], recording every batch with its minimum density
/// and a snapshot of the dynamic densities. Memory is `O(n * levels)`, so
/// this is meant for inspection and testing on small inputs.
pub fn rho_star_trace(g: &RnnGraph, rev: &ReverseGraph) -> Result<Vec<ErosionStep>> {
    let mut state = ErosionState::new(g, rev)?;
    let mut steps = Vec::new();
    loop {
        let densities = state.densities();
        match state.pop_batch() {
            Some((batch, min_density)) => steps.push(ErosionStep {
                batch,
                min_density,
                densities,
            }),
            None => break,
        }
    }
    Ok(steps)
}
