use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Inputs have incompatible shapes (grids, lengths, dimensions).
    #[error("shape error: {0}")]
    Shape(String),

    /// A checker precondition (support, symmetry, orthonormality) is violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An iterative eigensolver did not reach the requested residual.
    #[error("eigensolver did not converge: residual {residual:.3e} > tolerance {tolerance:.3e}")]
    Solver { residual: f64, tolerance: f64 },

    /// The covering partition needed more than the allowed number of dyadic levels.
    #[error("refinement depth {depth} exceeded: mass oracle concentrates beyond resolution")]
    Refinement { depth: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}
