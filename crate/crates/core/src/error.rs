use std::path::PathBuf;

use thiserror::Error;

use crate::model::Violation;

/// Every failure surfaced by the library.
#[derive(Debug, Error)]
pub enum ClusterError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("shape mismatch: {rows}x{cols} needs {expected} values, got {got}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        expected: usize,
        got: usize,
    },

    #[error("invalid data: {}", format_violations(.0))]
    InvalidData(Vec<Violation>),

    #[error("centroid contains a non-finite value")]
    NonFiniteCentroid,

    #[error("cluster count must be at least 1")]
    ZeroClusters,

    #[error("more clusters than points (k = {k}, n = {n})")]
    TooManyClusters { k: usize, n: usize },

    #[error("FCM requires at least two clusters")]
    FcmNeedsTwoClusters,

    #[error("fuzzifier m must be a finite real > 1, got {0}")]
    InvalidFuzzifier(f64),

    #[error("termination threshold must lie in (0, 1), got {0}")]
    InvalidEpsilon(f64),

    #[error("{name} must be at least 1")]
    NonPositive { name: &'static str },

    #[error("label {label} out of range for {k} clusters")]
    LabelOutOfRange { label: usize, k: usize },

    #[error("invalid membership matrix: {0}")]
    InvalidMembership(String),

    #[error("degenerate cluster weight in cluster {cluster}")]
    DegenerateClusterWeight { cluster: usize },

    #[error("operation count overflows 64-bit range")]
    Overflow,

    #[error("no data rows")]
    NoDataRows,

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("inconsistent column count at line {line}: expected {expected}, got {got}")]
    InconsistentColumns {
        line: usize,
        expected: usize,
        got: usize,
    },

    #[error("invalid feature selection: {0}")]
    InvalidFeatures(String),

    #[error("nothing to emit")]
    NothingToEmit,

    #[error("checksum mismatch: expected {expected}, got {got}")]
    ChecksumMismatch { expected: String, got: String },

    #[error("{context}: {message}")]
    External { context: String, message: String },

    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl ClusterError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        ClusterError::Io {
            path: path.into(),
            source,
        }
    }
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T> = std::result::Result<T, ClusterError>;
