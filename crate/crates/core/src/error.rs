use thiserror::Error;

use crate::state::PositivityReport;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed input data (non-Hermitian matrix, bad trace, incomplete Kraus set, ...).
    #[error("validation error: {0}")]
    Validation(String),

    /// A state failed the positivity test.
    #[error("unphysical state: min(a2, a3, a4) = {:.6e} (tolerance {:e})", .0.min_coefficient(), .0.tolerance)]
    Unphysical(Box<PositivityReport>),

    #[error("configuration error: {0}")]
    Config(String),

    /// An invariant that should hold for valid input did not.
    #[error("internal consistency error: {0}")]
    Consistency(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
