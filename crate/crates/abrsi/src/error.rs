//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by dataset handling, numerics and training.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: left is {left_rows}x{left_cols}, right is {right_rows}x{right_cols}")]
    DimensionMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("vector length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("non-finite value at row {row}, col {col}")]
    NonFinite { row: usize, col: usize },

    #[error("rank {rank} out of range for a {rows}x{cols} matrix")]
    RankOutOfRange {
        rank: usize,
        rows: usize,
        cols: usize,
    },

    #[error("svd did not converge after {sweeps} sweeps (off-diagonal residual {residual:e})")]
    SvdNonConvergence { sweeps: usize, residual: f64 },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("invalid cluster count {k} for {n} points")]
    BadClusterCount { k: usize, n: usize },

    #[error("label {label} outside category range [1, {k}]")]
    LabelOutOfRange { label: usize, k: usize },

    #[error("no shared categories between domains")]
    NoSharedCategories,

    #[error("missing column '{0}' in csv header")]
    MissingColumn(String),

    #[error("dataset empty after filtering ({0})")]
    EmptyAfterFiltering(String),

    #[error("non-finite gradient in parameter tensor '{0}'")]
    NonFiniteGradient(&'static str),

    #[error("non-finite loss at epoch {epoch}: sup={sup} abr={abr} div={div} te={te} ekl={ekl}")]
    NonFiniteLoss {
        epoch: usize,
        sup: f64,
        abr: f64,
        div: f64,
        te: f64,
        ekl: f64,
    },

    #[error("invalid configuration: {0}")]
    BadConfig(String),

    #[error("k-nearest-neighbour count {k} exceeds source size {n}")]
    TooFewNeighbours { k: usize, n: usize },

    #[error("threshold {0} outside (0, 1)")]
    BadThreshold(f64),

    #[error("entropic index alpha must be positive and != 1, got {0}")]
    BadAlpha(f64),

    #[error("discriminator output {0} outside (0, 1) after clamping")]
    BadDiscriminatorOutput(f64),

    #[error("unknown ablation preset '{0}'")]
    UnknownPreset(String),

    #[error("unknown sweep parameter '{0}'")]
    UnknownParameter(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("csv parse error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
