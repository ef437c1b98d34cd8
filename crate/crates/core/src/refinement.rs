//! Greedy refinement by single-document moves, plus the two ways of
//! producing the starting partition.
//!
//! Each iteration visits every document once in a fresh random order. A
//! visited document is moved to whichever other cluster gives the largest
//! strictly positive gain in `T` (ties to the lowest cluster index). The sole
//! member of a cluster is never moved, so all `K` clusters stay nonempty.
//! Refinement stops after an iteration with no accepted move.

use std::fmt;
use std::str::FromStr;

use crate::rng::{Stream, REFINEMENT_STREAM, SEEDING_STREAM};
use crate::seeding::{self, check_k, SeedSet};
use crate::{ClusteringSolution, Error, Result, Scalar, SparseVector};

pub const DEFAULT_MAX_ITERS: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RefineOptions {
    pub max_iters: usize,
}

impl Default for RefineOptions {
    fn default() -> Self {
        Self {
            max_iters: DEFAULT_MAX_ITERS,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefinementStats<T> {
    pub iterations: usize,
    pub moves_accepted: usize,
    /// `T` at the end of each iteration.
    pub t_history: Vec<T>,
    /// False when the iteration cap was hit before a move-free pass.
    pub converged: bool,
}

pub fn refine<T: Scalar>(
    docs: &[SparseVector<T>],
    sol: &mut ClusteringSolution<T>,
    rng_seed: u64,
    opts: RefineOptions,
) -> Result<RefinementStats<T>> {
    sol.check_consistency(docs)?;
    let k = sol.k();
    let mut rng = Stream::new(rng_seed, REFINEMENT_STREAM);
    let mut stats = RefinementStats {
        iterations: 0,
        moves_accepted: 0,
        t_history: Vec::new(),
        converged: false,
    };

    while stats.iterations < opts.max_iters {
        let order = rng.permutation(docs.len());
        let mut moved = 0usize;
        for doc in order {
            let from = sol.cluster_of(doc);
            if sol.sizes()[from] < 2 {
                continue;
            }
            let mut best: Option<(usize, T)> = None;
            for to in (0..k).filter(|&to| to != from) {
                let delta = sol.move_delta(docs, doc, to)?;
                if delta > T::zero() && best.is_none_or(|(_, b)| delta > b) {
                    best = Some((to, delta));
                }
            }
            if let Some((to, _)) = best {
                sol.apply_move(docs, doc, to)?;
                moved += 1;
            }
        }
        stats.iterations += 1;
        stats.moves_accepted += moved;
        stats.t_history.push(sol.criterion());
        if moved == 0 {
            stats.converged = true;
            break;
        }
    }
    Ok(stats)
}

/// `K` distinct documents drawn uniformly as seeds, then nearest-seed
/// assignment. This is the random-start baseline.
pub fn random_initial<T: Scalar>(docs: &[SparseVector<T>], k: usize, rng_seed: u64) -> Result<ClusteringSolution<T>> {
    check_k(k, docs.len())?;
    seeding::assign_to_seeds(docs, &random_seed_set(docs.len(), k, rng_seed))
}

fn random_seed_set(n: usize, k: usize, rng_seed: u64) -> SeedSet {
    SeedSet {
        seeds: Stream::new(rng_seed, SEEDING_STREAM).sample_distinct(n, k),
        r_param: 1,
        rng_seed,
    }
}

/// How the starting partition is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    /// Distance-sum seeding with the regulating pool, then refinement.
    Proposed,
    /// Uniform random seeds, then refinement.
    Baseline,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Proposed => "proposed",
            Method::Baseline => "baseline",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "proposed" => Ok(Method::Proposed),
            "baseline" => Ok(Method::Baseline),
            other => Err(Error::InvalidParameter(format!("unknown method `{other}`"))),
        }
    }
}

/// Result of a full two-phase run.
#[derive(Debug, Clone)]
pub struct ClusterRun<T> {
    pub solution: ClusteringSolution<T>,
    pub stats: RefinementStats<T>,
    pub seeds: Vec<usize>,
    /// `T` of the starting partition, before refinement.
    pub initial_t: T,
}

/// Builds the starting partition with `method` and refines it. `r` is only
/// used by [`Method::Proposed`]; `None` selects [`seeding::default_r`].
pub fn cluster<T: Scalar>(
    docs: &[SparseVector<T>],
    k: usize,
    r: Option<usize>,
    rng_seed: u64,
    method: Method,
    opts: RefineOptions,
) -> Result<ClusterRun<T>> {
    check_k(k, docs.len())?;
    let (mut solution, seeds) = match method {
        Method::Proposed => {
            let r = r.unwrap_or_else(|| seeding::default_r(docs.len(), k));
            let (set, _) = seeding::select_seeds(docs, k, r, rng_seed)?;
            (seeding::assign_to_seeds(docs, &set)?, set.seeds)
        }
        Method::Baseline => {
            let set = random_seed_set(docs.len(), k, rng_seed);
            (seeding::assign_to_seeds(docs, &set)?, set.seeds)
        }
    };
    let initial_t = solution.criterion();
    let stats = refine(docs, &mut solution, rng_seed, opts)?;
    Ok(ClusterRun {
        solution,
        stats,
        seeds,
        initial_t,
    })
}
