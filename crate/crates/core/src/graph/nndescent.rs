//! NN-Descent approximate k-NN graph construction.
//!
//! Starts from random neighbor lists and repeatedly compares each sample's
//! neighbors (and reverse neighbors) with one another, keeping any pair that
//! improves either list. Only pairs involving at least one "new" entry are
//! compared each round. The run stops once fewer than
//! `termination_delta * n * k` list updates happen in a round.
//!
//! The implementation is single-threaded, so a fixed seed always yields the
//! same graph.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::knn::{check_k, KnnGraph};
use super::Neighbor;
use crate::dataset::{Dataset, Metric, Space};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NnDescentParams {
    pub k: usize,
    /// Fraction of each list sampled as join candidates per round.
    pub sample_rate: f64,
    pub termination_delta: f64,
    pub max_iters: usize,
    pub seed: u64,
}

impl Default for NnDescentParams {
    fn default() -> Self {
        NnDescentParams {
            k: 10,
            sample_rate: 1.0,
            termination_delta: 0.001,
            max_iters: 30,
            seed: 0,
        }
    }
}

impl NnDescentParams {
    pub fn with_k(k: usize) -> Self {
        NnDescentParams {
            k,
            ..Default::default()
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        check_k(self.k, n)?;
        if !(self.sample_rate > 0.0 && self.sample_rate <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "sample_rate must lie in (0, 1], got {}",
                self.sample_rate
            )));
        }
        if !(self.termination_delta > 0.0 && self.termination_delta < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "termination_delta must lie in (0, 1), got {}",
                self.termination_delta
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidParameter("max_iters must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
struct Slot {
    id: u32,
    dist: f64,
    fresh: bool,
}

/// Bounded neighbor list kept sorted by (dist, id).
struct Pool {
    slots: Vec<Slot>,
    cap: usize,
}

impl Pool {
    fn new(cap: usize) -> Self {
        Pool {
            slots: Vec::with_capacity(cap + 1),
            cap,
        }
    }

    fn insert(&mut self, id: u32, dist: f64) -> bool {
        let key = |s: &Slot| (s.dist, s.id);
        if self.slots.len() == self.cap {
            let worst = key(self.slots.last().expect("cap > 0"));
            if (dist, id) >= worst {
                return false;
            }
        }
        if self.slots.iter().any(|s| s.id == id) {
            return false;
        }
        let pos = self
            .slots
            .partition_point(|s| s.dist.total_cmp(&dist).then(s.id.cmp(&id)).is_lt());
        self.slots.insert(
            pos,
            Slot {
                id,
                dist,
                fresh: true,
            },
        );
        self.slots.truncate(self.cap);
        true
    }
}

fn sample_into(rng: &mut ChaCha8Rng, src: &[u32], count: usize, out: &mut Vec<u32>) {
    if src.len() <= count {
        out.extend_from_slice(src);
    } else {
        out.extend(
            index::sample(rng, src.len(), count)
                .into_iter()
                .map(|p| src[p]),
        );
    }
}

/// Approximate k-NN graph by NN-Descent.
pub fn build_nndescent_knn(
    view: &Dataset,
    metric: Metric,
    params: NnDescentParams,
) -> Result<KnnGraph> {
    let n = view.len();
    params.validate(n)?;
    if n > u32::MAX as usize {
        return Err(Error::InvalidParameter(
            "NN-Descent supports at most 2^32 samples".into(),
        ));
    }
    let space = Space::new(view, metric)?;
    let k = params.k;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let mut pools: Vec<Pool> = (0..n)
        .map(|v| {
            let mut pool = Pool::new(k);
            for pick in index::sample(&mut rng, n - 1, k) {
                let u = if pick >= v { pick + 1 } else { pick };
                pool.insert(u as u32, space.dist(v, u));
            }
            pool
        })
        .collect();

    let per_list = ((params.sample_rate * k as f64).ceil() as usize).max(1);
    let threshold = params.termination_delta * (n * k) as f64;

    let mut old: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut new: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut old_rev: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut new_rev: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut fresh_pos: Vec<usize> = Vec::with_capacity(k);

    for _ in 0..params.max_iters {
        for lists in [&mut old, &mut new, &mut old_rev, &mut new_rev] {
            lists.iter_mut().for_each(Vec::clear);
        }

        for v in 0..n {
            let pool = &mut pools[v];
            fresh_pos.clear();
            for (pos, s) in pool.slots.iter().enumerate() {
                if s.fresh {
                    fresh_pos.push(pos);
                } else {
                    old[v].push(s.id);
                }
            }
            if fresh_pos.len() > per_list {
                // Partial Fisher-Yates: the first `per_list` positions are the sample.
                for a in 0..per_list {
                    let b = rng.random_range(a..fresh_pos.len());
                    fresh_pos.swap(a, b);
                }
                fresh_pos.truncate(per_list);
            }
            for &pos in &fresh_pos {
                pool.slots[pos].fresh = false;
                new[v].push(pool.slots[pos].id);
            }
        }

        for v in 0..n {
            for &u in &old[v] {
                old_rev[u as usize].push(v as u32);
            }
            for &u in &new[v] {
                new_rev[u as usize].push(v as u32);
            }
        }

        let mut updates = 0usize;
        let mut cand_new: Vec<u32> = Vec::with_capacity(2 * per_list);
        let mut cand_old: Vec<u32> = Vec::with_capacity(2 * k);
        for v in 0..n {
            cand_new.clear();
            cand_old.clear();
            cand_new.extend_from_slice(&new[v]);
            sample_into(&mut rng, &new_rev[v], per_list, &mut cand_new);
            cand_old.extend_from_slice(&old[v]);
            sample_into(&mut rng, &old_rev[v], per_list, &mut cand_old);
            cand_new.sort_unstable();
            cand_new.dedup();
            cand_old.sort_unstable();
            cand_old.dedup();
            cand_old.retain(|u| cand_new.binary_search(u).is_err());

            for (a, &u1) in cand_new.iter().enumerate() {
                for &u2 in cand_new[a + 1..].iter().chain(cand_old.iter()) {
                    let d = space.dist(u1 as usize, u2 as usize);
                    updates += pools[u1 as usize].insert(u2, d) as usize;
                    updates += pools[u2 as usize].insert(u1, d) as usize;
                }
            }
        }

        if (updates as f64) < threshold {
            break;
        }
    }

    let lists = pools
        .into_iter()
        .map(|p| {
            p.slots
                .into_iter()
                .map(|s| Neighbor::new(s.id as usize, s.dist))
                .collect()
        })
        .collect();
    Ok(KnnGraph::from_lists_unchecked(lists, k))
}
