use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes of the numerical routines.
///
/// Numeric payloads are widened to `f64` so the error type does not depend
/// on the scalar parameter.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("range error: {0}")]
    Range(String),

    /// Adaptive quadrature hit its depth cap. Carries the best estimate.
    #[error(
        "quadrature did not converge: estimate {estimate} with error bound {error_bound} after {evaluations} evaluations"
    )]
    Convergence {
        estimate: f64,
        error_bound: f64,
        evaluations: usize,
    },

    #[error("unsupported combination: {0}")]
    UnsupportedCombination(String),

    #[error("no sign change on [{lo}, {hi}]")]
    Search { lo: f64, hi: f64 },

    #[error("evaluation error: {0}")]
    Evaluation(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn is_convergence(&self) -> bool {
        matches!(self, Error::Convergence { .. })
    }
}
