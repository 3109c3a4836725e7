//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by image handling, solvers, and the CLI front end.
#[derive(Debug, Error)]
pub enum HazeError {
    /// Image construction or validation failed (bad dimensions, channel
    /// count, sample count, or non-finite samples).
    #[error("invalid image: {0}")]
    InvalidImage(String),

    /// Two images that must share a shape do not.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Atmospheric light incompatible with the radiance bounds, making a
    /// boundary-constraint denominator non-positive.
    #[error("degenerate atmosphere: {0}")]
    DegenerateAtmosphere(String),

    /// The iterative linear solve failed to reach its residual target.
    #[error("solver stall: residual {residual:.3e} after {iterations} iterations")]
    SolverStall { residual: f64, iterations: usize },

    /// Invalid parameter value or unknown configuration key.
    #[error("config error: {0}")]
    Config(String),

    /// Weight-file magic, version, or shape did not match expectations.
    #[error("format error: {0}")]
    Format(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// PNG/PNM decode or encode failure.
    #[error("image codec error: {0}")]
    Codec(String),
}

pub type Result<T> = std::result::Result<T, HazeError>;
