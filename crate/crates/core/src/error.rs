use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid construction parameters or references to unknown graph elements.
    #[error("parameter error: {0}")]
    Param(String),

    /// Malformed or incomplete input data.
    #[error("input error: {0}")]
    Input(String),

    /// A predicted or observed size exceeded its budget.
    #[error("size error: {0}")]
    Size(String),

    /// The supplied monomial does not certify anything (zero coefficient).
    #[error("witness error: {0}")]
    Witness(String),

    /// Exhaustive search found no admissible weighting.
    #[error("unsatisfiable: {0}")]
    Unsatisfiable(String),

    /// Something that must not happen did; indicates a bug, not bad input.
    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
