use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent configuration data.
    #[error("configuration error: {0}")]
    Config(String),

    /// An operation was called outside its domain (e.g. `n(β)` at `β = 0`).
    #[error("domain error: {0}")]
    Domain(String),

    /// A documented precondition of an operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The computation produced something that cannot be a Poincaré series.
    #[error("inconsistent configuration: {0}")]
    Inconsistent(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by the input rather than by the engine.
    pub fn is_config_error(&self) -> bool {
        !matches!(self, Error::Internal(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
