use thiserror::Error;

/// Errors raised by the library. Each variant maps onto a CLI exit code.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: dangling ids, broken invariants, failed preconditions.
    #[error("validation error: {0}")]
    Validation(String),

    /// A query touched a point whose neighbourhood is cut off by the window.
    #[error("boundary error: {0}")]
    Boundary(String),

    /// A configured cap (paths, rank, window) was exceeded.
    #[error("resource limit: {0}")]
    Resource(String),

    /// An algorithm broke its own contract. Always a bug.
    #[error("algorithm failure: {0}")]
    AlgorithmFailure(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("schema error at {}: {message}", if pointer.is_empty() { "document root" } else { pointer.as_str() })]
    Schema { pointer: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_) | Error::Schema { .. } | Error::Unsupported(_) | Error::Io(_) => 2,
            Error::Boundary(_) | Error::Resource(_) => 3,
            Error::AlgorithmFailure(_) => 4,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

macro_rules! validation {
    ($($arg:tt)*) => { $crate::error::Error::Validation(format!($($arg)*)) };
}
pub(crate) use validation;
