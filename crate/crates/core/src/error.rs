use thiserror::Error;

/// Errors raised by construction, validation and checking.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("modulus mismatch: {0} vs {1}")]
    Modulus(u32, u32),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("invalid equivariant structure: {0}")]
    InvalidEquivariant(String),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
