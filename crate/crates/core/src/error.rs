use thiserror::Error;

/// Errors reported by constructions and verifications in this crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("function is not bent: {0}")]
    NotBent(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("singular linear map")]
    Singular,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
