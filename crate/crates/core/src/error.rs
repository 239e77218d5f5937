use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A point or argument lies outside the domain an operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),
    /// A caller broke an interface contract (dimension mismatch, non-unit
    /// vector where a boundary point is required, inadmissible parameters...).
    #[error("contract error: {0}")]
    Contract(String),
    /// Parameters whose constraint residuals exceed the admissibility gate.
    #[error("inadmissible parameters: scalar residual {scalar:.3e}, vector residual {vector:.3e}")]
    Inadmissible { scalar: f64, vector: f64 },
    /// No solver start converged; carries the best residual seen.
    #[error("no start converged (best residual {best_residual:.3e})")]
    NonConvergence { best_residual: f64 },
    /// A sampled function value was not finite; carries the angle of failure.
    #[error("evaluation failed at theta = {theta}")]
    Eval { theta: f64 },
    /// A numerical cross-check did not close to the required tolerance.
    #[error("precision loss: {0}")]
    Precision(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}
