use std::path::PathBuf;

use crate::Vector;

/// Errors raised by the solvers and the benchmark harness.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    /// An inner solve stopped at its iteration cap. Carries the best iterate.
    #[error("{what} did not converge in {iterations} iterations (residual {residual:e})")]
    NonConvergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
        best: Vector,
    },

    /// No trial of the Armijo rule was accepted. Each trial is `(m, lhs, rhs)`.
    #[error("linesearch failed after {} trials", trials.len())]
    LinesearchFailure { trials: Vec<(u32, f64, f64)> },

    /// A computed quantity contradicts a standing assumption on the instance.
    #[error("assumption violated: {0}")]
    AssumptionViolation(String),

    #[error("bifunction cannot provide a subgradient at the requested point")]
    UndefinedSubgradient,

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization error: {0}")]
    Serde(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

pub(crate) fn check_finite(v: &Vector, what: &str) -> Result<()> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{what} has non-finite entries"
        )))
    }
}
