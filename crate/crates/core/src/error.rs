//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("variable {variable}: label {label} out of range (label count {label_count})")]
    LabelOutOfRange {
        variable: usize,
        label: usize,
        label_count: usize,
    },

    #[error("sample set is empty")]
    EmptySampleSet,

    #[error("fine variable {0} has no coarse neighbor with positive agreement")]
    NoCoarseNeighbor(usize),

    #[error("row {row} of interpolation matrix sums to {sum}, expected 1")]
    NotRowStochastic { row: usize, sum: f64 },

    #[error("state space too large: {labels}^{variables} exceeds limit {limit}")]
    StateSpaceTooLarge {
        variables: usize,
        labels: usize,
        limit: u64,
    },

    #[error("format error: {0}")]
    Format(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
