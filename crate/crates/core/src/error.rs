use thiserror::Error;

/// Errors produced by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The result is not representable as a finite `f64` (or `u128`).
    #[error("overflow: {0}")]
    Overflow(String),

    /// A documented precondition of the operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The data admit no estimate inside the parameter space.
    #[error("degenerate data: {0}")]
    DegenerateData(String),

    /// Adaptive quadrature ran out of its evaluation budget.
    #[error(
        "quadrature did not converge after {evaluations} evaluations \
         (partial = {partial}, error estimate = {error_estimate})"
    )]
    NonConvergence {
        partial: f64,
        error_estimate: f64,
        evaluations: usize,
    },

    /// A post-condition check on a computed value failed.
    #[error("numerical check failed: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
