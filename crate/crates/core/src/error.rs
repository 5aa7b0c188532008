//! Error types shared by all solver modules.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A configuration document or parameter set violated an invariant.
    /// Carries the 1-based line number of the offending key (0 when the
    /// error does not originate from a parsed document).
    #[error("configuration error (line {line}): {message}")]
    Config { line: usize, message: String },

    /// An argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Quadrature exhausted its evaluation budget before reaching the
    /// requested tolerance. Carries the best estimate so far.
    #[error("quadrature did not converge: best estimate {best:e}, error estimate {error_estimate:e} after {evaluations} evaluations")]
    NonConvergence {
        best: f64,
        error_estimate: f64,
        evaluations: u64,
    },

    /// A computation would exceed a documented resource budget.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
}

impl Error {
    pub fn config(line: usize, message: impl Into<String>) -> Self {
        Error::Config {
            line,
            message: message.into(),
        }
    }

    pub fn domain(message: impl Into<String>) -> Self {
        Error::Domain(message.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
