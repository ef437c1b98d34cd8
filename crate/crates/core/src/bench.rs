//! Repeated paired-seed clustering runs scored by entropy.
//!
//! For every `(method, K, trial)` the harness clusters with
//! `rng_seed = base_seed + trial`, so each trial index uses the same seed for
//! every method. Runs execute in parallel; rows are reported in
//! `(method, K, trial)` order regardless of completion order.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;

use crate::evaluation::solution_entropy;
use crate::numfmt::fixed6;
use crate::refinement::{cluster, DEFAULT_MAX_ITERS};
use crate::{Error, RefineOptions, Result, Scalar, SparseVector};

pub use crate::refinement::Method;

pub const DEFAULT_K_VALUES: [usize; 4] = [10, 15, 20, 25];
pub const DEFAULT_TRIALS: usize = 10;

/// How the seeding pool size `R` is chosen per run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RPolicy {
    /// `max(1, ⌈N / (10·K)⌉)`.
    #[default]
    Auto,
    Fixed(usize),
}

impl RPolicy {
    fn resolve(self) -> Option<usize> {
        match self {
            RPolicy::Auto => None,
            RPolicy::Fixed(r) => Some(r),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    /// Name written in the `dataset` column.
    pub dataset: String,
    pub k_values: Vec<usize>,
    pub trials: usize,
    pub r: RPolicy,
    pub base_seed: u64,
    pub methods: Vec<Method>,
    pub max_iters: usize,
    /// Worker cap; `None` uses rayon's default pool.
    pub threads: Option<usize>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            dataset: "dataset".to_owned(),
            k_values: DEFAULT_K_VALUES.to_vec(),
            trials: DEFAULT_TRIALS,
            r: RPolicy::Auto,
            base_seed: 0,
            methods: vec![Method::Proposed, Method::Baseline],
            max_iters: DEFAULT_MAX_ITERS,
            threads: None,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        if self.k_values.is_empty() {
            return Err(Error::InvalidParameter("k list is empty".into()));
        }
        if let Some(k) = self.k_values.iter().find(|&&k| k < 2) {
            return Err(Error::InvalidParameter(format!("k={k} is below 2")));
        }
        if self.methods.is_empty() {
            return Err(Error::InvalidParameter("no methods selected".into()));
        }
        if self.threads == Some(0) {
            return Err(Error::InvalidParameter("thread count must be at least 1".into()));
        }
        Ok(())
    }
}

/// One clustering run. Failed runs carry `error` and no scores.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub dataset: String,
    pub method: Method,
    pub k: usize,
    pub trial: usize,
    pub rng_seed: u64,
    pub entropy: Option<f64>,
    pub final_t: Option<f64>,
    pub iterations: usize,
    pub moves: usize,
    pub converged: bool,
    pub wall_time_ms: f64,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub dataset: String,
    pub method: Method,
    pub k: usize,
    /// Successful runs contributing to the statistics.
    pub runs: usize,
    pub mean_entropy: f64,
    /// Sample standard deviation; zero for a single run.
    pub std_entropy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchResult {
    pub rows: Vec<BenchRow>,
    pub aggregates: Vec<AggregateRow>,
}

fn run_one<T: Scalar>(
    docs: &[SparseVector<T>],
    labels: &[String],
    cfg: &BenchConfig,
    method: Method,
    k: usize,
    trial: usize,
) -> BenchRow {
    let rng_seed = cfg.base_seed.wrapping_add(trial as u64);
    let start = Instant::now();
    let outcome = cluster(
        docs,
        k,
        cfg.r.resolve(),
        rng_seed,
        method,
        RefineOptions {
            max_iters: cfg.max_iters,
        },
    )
    .and_then(|run| {
        let report = solution_entropy::<T, _>(&run.solution, labels)?;
        Ok((run, report))
    });
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    let mut row = BenchRow {
        dataset: cfg.dataset.clone(),
        method,
        k,
        trial,
        rng_seed,
        entropy: None,
        final_t: None,
        iterations: 0,
        moves: 0,
        converged: false,
        wall_time_ms,
        error: None,
    };
    match outcome {
        Ok((run, report)) => {
            row.entropy = Some(report.total.to_f64_lossy());
            row.final_t = Some(run.solution.criterion().to_f64_lossy());
            row.iterations = run.stats.iterations;
            row.moves = run.stats.moves_accepted;
            row.converged = run.stats.converged;
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

/// Mean and sample standard deviation.
fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

pub fn aggregate(rows: &[BenchRow]) -> Vec<AggregateRow> {
    let mut out: Vec<AggregateRow> = Vec::new();
    let mut i = 0;
    while i < rows.len() {
        let (method, k) = (rows[i].method, rows[i].k);
        let end = i + rows[i..]
            .iter()
            .take_while(|r| r.method == method && r.k == k)
            .count();
        let scores: Vec<f64> = rows[i..end].iter().filter_map(|r| r.entropy).collect();
        let (mean_entropy, std_entropy) = mean_std(&scores);
        out.push(AggregateRow {
            dataset: rows[i].dataset.clone(),
            method,
            k,
            runs: scores.len(),
            mean_entropy,
            std_entropy,
        });
        i = end;
    }
    out
}

/// Runs every `(method, K, trial)` combination of `cfg` on unit-length
/// `docs` with ground-truth `labels`.
pub fn run_bench<T: Scalar>(docs: &[SparseVector<T>], labels: &[String], cfg: &BenchConfig) -> Result<BenchResult> {
    cfg.validate()?;
    if labels.len() != docs.len() {
        return Err(Error::LabelCount {
            labels: labels.len(),
            docs: docs.len(),
        });
    }
    let jobs: Vec<(Method, usize, usize)> = cfg
        .methods
        .iter()
        .flat_map(|&m| {
            cfg.k_values
                .iter()
                .flat_map(move |&k| (0..cfg.trials).map(move |t| (m, k, t)))
        })
        .collect();

    let work = || -> Vec<BenchRow> {
        jobs.par_iter()
            .map(|&(m, k, t)| run_one(docs, labels, cfg, m, k, t))
            .collect()
    };
    let rows = match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidParameter(e.to_string()))?
            .install(work),
        None => work(),
    };
    let aggregates = aggregate(&rows);
    Ok(BenchResult { rows, aggregates })
}

impl BenchResult {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }

    pub fn aggregate_for(&self, method: Method, k: usize) -> Option<&AggregateRow> {
        self.aggregates.iter().find(|a| a.method == method && a.k == k)
    }

    /// Per-run CSV. `wall_time_ms` is appended only when `timings` is set,
    /// since it differs between otherwise identical runs.
    pub fn write_rows_csv<W: Write>(&self, w: W, timings: bool) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec![
            "dataset", "method", "k", "trial", "rng_seed", "entropy", "final_t", "iterations", "moves",
            "converged", "error",
        ];
        if timings {
            header.push("wall_time_ms");
        }
        out.write_record(&header)?;
        for r in &self.rows {
            let mut rec = vec![
                r.dataset.clone(),
                r.method.to_string(),
                r.k.to_string(),
                r.trial.to_string(),
                r.rng_seed.to_string(),
                r.entropy.map(fixed6).unwrap_or_default(),
                r.final_t.map(fixed6).unwrap_or_default(),
                r.iterations.to_string(),
                r.moves.to_string(),
                r.converged.to_string(),
                r.error.clone().unwrap_or_default(),
            ];
            if timings {
                rec.push(format!("{:.3}", r.wall_time_ms));
            }
            out.write_record(&rec)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn write_aggregates_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["dataset", "method", "k", "runs", "mean_entropy", "std_entropy"])?;
        for a in &self.aggregates {
            out.write_record([
                a.dataset.clone(),
                a.method.to_string(),
                a.k.to_string(),
                a.runs.to_string(),
                fixed6(a.mean_entropy),
                fixed6(a.std_entropy),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}
