use thiserror::Error;

/// Errors produced by table construction, dataset building, training and metrics.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid order {order}: {reason}")]
    InvalidOrder { order: usize, reason: String },

    #[error("unsupported order {order}: {reason}")]
    UnsupportedOrder { order: usize, reason: String },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("not a Latin square: {0}")]
    NotLatin(String),

    #[error("not a group table: {0}")]
    NotGroup(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("line {line}: {message}")]
    Record { line: usize, message: String },

    #[error("undefined metric: {0}")]
    Undefined(String),

    #[error("unknown recipe `{0}`")]
    UnknownRecipe(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
