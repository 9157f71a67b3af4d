//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// A value violated a documented contract (e.g. an invalid POVM).
    #[error("contract violation: {0}")]
    ContractViolation(String),
    /// Inputs are degenerate for the requested construction (e.g. the SLD
    /// span collapses at |phi| = 2n*pi).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
