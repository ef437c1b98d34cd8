//! Initial clustering: seed selection followed by nearest-seed assignment.
//!
//! The first seed is drawn uniformly. The second is the document farthest
//! from it. Every later seed is chosen in two stages: rank the non-seed
//! documents by their summed distance to the current seeds (largest first),
//! keep the top `R`, and among those take the document with the smallest
//! summed *squared* distance. All ties go to the lowest document index.
//!
//! Distances are Euclidean on unit vectors, `√(2 − 2·dot)`. Each document
//! carries running `(Σ dist, Σ dist²)` sums that are updated once per new
//! seed, so no `N × N` distance matrix is ever built.

use crate::rng::{Stream, SEEDING_STREAM};
use crate::{ClusteringSolution, Error, Result, Scalar, SparseVector};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedSet {
    pub seeds: Vec<usize>,
    pub r_param: usize,
    pub rng_seed: u64,
}

/// One seed choice after the second: the candidate pool with each
/// candidate's distance sum and squared-distance sum.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedStep<T> {
    pub candidates: Vec<usize>,
    pub dist_sums: Vec<T>,
    pub sq_sums: Vec<T>,
    pub chosen: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SeedTrace<T> {
    pub steps: Vec<SeedStep<T>>,
}

/// Default candidate-pool size: `max(1, ⌈N / (10·K)⌉)`.
pub fn default_r(n: usize, k: usize) -> usize {
    n.div_ceil(10 * k.max(1)).max(1)
}

/// Euclidean distance between unit vectors via `√(2 − 2·dot)`.
pub fn unit_distance<T: Scalar>(a: &SparseVector<T>, b: &SparseVector<T>) -> Result<T> {
    let two = T::of(2.0);
    Ok((two - two * a.dot(b)?).max(T::zero()).sqrt())
}

pub(crate) fn check_k(k: usize, n: usize) -> Result<()> {
    if k < 2 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    Ok(())
}

/// Running distance sums of every document to the seeds chosen so far.
struct Traversal<'a, T> {
    docs: &'a [SparseVector<T>],
    seeds: Vec<usize>,
    is_seed: Vec<bool>,
    dist_sum: Vec<T>,
    sq_sum: Vec<T>,
}

impl<'a, T: Scalar> Traversal<'a, T> {
    fn new(docs: &'a [SparseVector<T>]) -> Self {
        let n = docs.len();
        Self {
            docs,
            seeds: Vec::new(),
            is_seed: vec![false; n],
            dist_sum: vec![T::zero(); n],
            sq_sum: vec![T::zero(); n],
        }
    }

    fn non_seeds(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.docs.len()).filter(|&i| !self.is_seed[i])
    }

    fn add_seed(&mut self, s: usize) -> Result<()> {
        self.seeds.push(s);
        self.is_seed[s] = true;
        let seed = &self.docs[s];
        for (i, d) in self.docs.iter().enumerate() {
            if !self.is_seed[i] {
                let dist = unit_distance(d, seed)?;
                self.dist_sum[i] += dist;
                self.sq_sum[i] += dist * dist;
            }
        }
        Ok(())
    }
}

pub fn select_seeds<T: Scalar>(
    docs: &[SparseVector<T>],
    k: usize,
    r: usize,
    rng_seed: u64,
) -> Result<(SeedSet, SeedTrace<T>)> {
    let n = docs.len();
    check_k(k, n)?;
    if r < 1 || r > n {
        return Err(Error::InvalidR { r, n });
    }

    let mut rng = Stream::new(rng_seed, SEEDING_STREAM);
    let mut state = Traversal::new(docs);
    let mut trace = SeedTrace { steps: Vec::new() };

    state.add_seed(rng.below(n))?;

    // With one seed the distance sum is the distance itself.
    let mut far: Option<usize> = None;
    for i in state.non_seeds() {
        if far.is_none_or(|f| state.dist_sum[i] > state.dist_sum[f]) {
            far = Some(i);
        }
    }
    state.add_seed(far.expect("k <= n leaves a non-seed"))?;

    while state.seeds.len() < k {
        let (dist_sum, sq_sum) = (&state.dist_sum, &state.sq_sum);
        let mut ranked: Vec<usize> = state.non_seeds().collect();
        // stable sort keeps ascending index among equal sums
        ranked.sort_by(|&a, &b| dist_sum[b].partial_cmp(&dist_sum[a]).expect("finite distances"));
        ranked.truncate(r);

        let mut chosen = ranked[0];
        for &c in &ranked[1..] {
            if sq_sum[c] < sq_sum[chosen] || (sq_sum[c] == sq_sum[chosen] && c < chosen) {
                chosen = c;
            }
        }
        trace.steps.push(SeedStep {
            dist_sums: ranked.iter().map(|&c| dist_sum[c]).collect(),
            sq_sums: ranked.iter().map(|&c| sq_sum[c]).collect(),
            candidates: ranked,
            chosen,
        });
        state.add_seed(chosen)?;
    }
    let seeds = state.seeds;

    Ok((
        SeedSet {
            seeds,
            r_param: r,
            rng_seed,
        },
        trace,
    ))
}

/// Cluster index of each document: seed `r` goes to cluster `r`, every other
/// document to its nearest seed (ties to the lowest seed index).
pub fn nearest_seed_assignment<T: Scalar>(docs: &[SparseVector<T>], seeds: &[usize]) -> Result<Vec<usize>> {
    let mut assignment = vec![usize::MAX; docs.len()];
    for (r, &s) in seeds.iter().enumerate() {
        if s >= docs.len() {
            return Err(Error::DocOutOfRange { doc: s, n: docs.len() });
        }
        if assignment[s] != usize::MAX {
            return Err(Error::InvalidParameter(format!("seed {s} listed twice")));
        }
        assignment[s] = r;
    }
    for (i, d) in docs.iter().enumerate() {
        if assignment[i] != usize::MAX {
            continue;
        }
        let mut best = 0;
        let mut best_dist = T::infinity();
        for (r, &s) in seeds.iter().enumerate() {
            let dist = unit_distance(d, &docs[s])?;
            if dist < best_dist {
                best = r;
                best_dist = dist;
            }
        }
        assignment[i] = best;
    }
    Ok(assignment)
}

pub fn assign_to_seeds<T: Scalar>(docs: &[SparseVector<T>], seed_set: &SeedSet) -> Result<ClusteringSolution<T>> {
    let assignment = nearest_seed_assignment(docs, &seed_set.seeds)?;
    ClusteringSolution::from_assignment(docs, assignment, seed_set.seeds.len())
}
