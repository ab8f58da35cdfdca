use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("intensity {value} out of range for {levels} levels")]
    IntensityOutOfRange { value: u8, levels: usize },

    #[error("conjugate gradient did not converge after {steps} steps (relative residual {residual:e})")]
    SolverDidNotConverge { steps: usize, residual: f64 },

    #[error("cannot read {path}")]
    Unreadable {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("unsupported image format for {path}: {reason}")]
    UnsupportedFormat { path: PathBuf, reason: String },

    #[error("image {path} is too large: {width}x{height}")]
    DimensionOverflow { path: PathBuf, width: u64, height: u64 },

    #[error("cannot write {path}: {reason}")]
    Write { path: PathBuf, reason: String },
}
