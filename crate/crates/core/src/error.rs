use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input violated a documented precondition.
    #[error("validation error: {0}")]
    Validation(String),

    /// Two objects that must agree in dimension do not.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    /// A density matrix has an eigenvalue below the clipping threshold.
    #[error("positivity error: eigenvalue {eigenvalue:e} below -1e-10")]
    Positivity { eigenvalue: f64 },

    /// An iterative routine did not converge.
    #[error("numerical error: {what} did not converge within {iterations} iterations (dim {dim})")]
    Convergence {
        what: &'static str,
        iterations: usize,
        dim: usize,
    },

    /// An operation was called outside the regime it is defined for.
    #[error("contract violation: {0}")]
    Contract(String),

    /// The system exceeds the configured size limit.
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
