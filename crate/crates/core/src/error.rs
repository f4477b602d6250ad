use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A numerical routine could not reach its tolerance or budget.
    #[error("numerical failure: {0}")]
    Numeric(String),
    /// Caller broke a size or shape precondition.
    #[error("contract violation: {0}")]
    Contract(String),
    /// A checked mathematical invariant failed.
    #[error("invariant violated: {0}")]
    Invariant(String),
    /// Malformed serialized input.
    #[error("decode error: {0}")]
    Decode(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! domain {
    ($($arg:tt)*) => { $crate::error::Error::Domain(format!($($arg)*)) };
}
macro_rules! contract {
    ($($arg:tt)*) => { $crate::error::Error::Contract(format!($($arg)*)) };
}
pub(crate) use contract;
pub(crate) use domain;
