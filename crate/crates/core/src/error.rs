use thiserror::Error;

use crate::model::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid parameters passed to a constructor or operation.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// Mismatched models or tensor powers.
    #[error("shape error: {0}")]
    Shape(String),

    /// The model data is structurally unusable (e.g. degenerate pairing).
    #[error("model error: {0}")]
    Model(String),

    /// A model failed validation; the violations are listed.
    #[error("invalid model: {} violation(s); first: {}", .0.len(), .0.first().map(|v| v.to_string()).unwrap_or_default())]
    InvalidModel(Vec<Violation>),

    /// An operation precondition does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// The dense-term bound of a computation exceeds the configured cap.
    #[error("resource limit: {what} needs up to {bound} terms, cap is {cap}")]
    Resource { what: String, bound: u128, cap: u128 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
