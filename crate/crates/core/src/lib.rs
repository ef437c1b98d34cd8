//! Partitional document clustering over tf-idf vectors.
//!
//! The pipeline has two phases. An initial clustering picks `K` seed
//! documents by a distance-sum / squared-distance-sum traversal and assigns
//! every other document to its nearest seed. A refinement phase then moves
//! single documents between clusters, in random order, whenever the move
//! strictly increases the internal criterion `T = Σ_r Σ_{d∈S_r} cos(d, C_r)`.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases at
//! the crate root fix it to `f64`, which is what the CLI uses.

pub mod bench;
pub mod criterion;
pub mod datasets;
mod error;
pub mod numfmt;
pub mod evaluation;
pub mod refinement;
pub mod rng;
mod scalar;
pub mod seeding;
pub mod sparse;
pub mod vectorizer;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use bench::{BenchConfig, BenchResult, Method, RPolicy};
pub use criterion::ClusteringSolution;
pub use datasets::{ClutoMatrix, SyntheticSpec};
pub use evaluation::EntropyReport;
pub use refinement::{RefineOptions, RefinementStats};
pub use seeding::{SeedSet, SeedTrace};
pub use sparse::{DenseAccumulator, SparseVector};
pub use vectorizer::{DocTermMatrix, TfIdfModel, Transformed};

/// Sparse document vector with `f64` weights.
pub type SparseVec = SparseVector<f64>;
/// Dense composite accumulator with `f64` entries.
pub type DenseVec = DenseAccumulator<f64>;
/// Clustering state with `f64` composites.
pub type Solution = ClusteringSolution<f64>;
/// Document-term matrix with `f64` weights.
pub type Matrix = DocTermMatrix<f64>;
/// Entropy report with `f64` values.
pub type Report = EntropyReport<f64>;
