use std::path::PathBuf;

/// Errors produced by the clustering library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("zero-norm vector")]
    ZeroNorm,

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("term id {term} out of range for dimension {dim}")]
    TermOutOfRange { term: usize, dim: usize },

    #[error("invalid sparse entries: {0}")]
    InvalidEntries(&'static str),

    #[error("duplicate document id `{0}`")]
    DuplicateDocId(String),

    #[error("invalid cluster count k={k} for n={n} documents (need 2 <= k <= n)")]
    InvalidK { k: usize, n: usize },

    #[error("invalid regulating parameter r={r} for n={n} documents (need 1 <= r <= n)")]
    InvalidR { r: usize, n: usize },

    #[error("cluster index {cluster} out of range (k={k})")]
    ClusterOutOfRange { cluster: usize, k: usize },

    #[error("document index {doc} out of range (n={n})")]
    DocOutOfRange { doc: usize, n: usize },

    #[error("document {doc} is already in cluster {cluster}")]
    SameCluster { doc: usize, cluster: usize },

    #[error("document {doc} is the sole member of cluster {cluster}")]
    SoleMember { doc: usize, cluster: usize },

    #[error("cluster {0} is empty")]
    EmptyCluster(usize),

    #[error("inconsistent clustering state: {0}")]
    Inconsistent(String),

    #[error("need at least two classes to normalise entropy, found {0}")]
    TooFewClasses(usize),

    #[error("label count {labels} does not match document count {docs}")]
    LabelCount { labels: usize, docs: usize },

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
