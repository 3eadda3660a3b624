//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by solvers, geometric queries, and experiment drivers.
#[derive(Debug, Error)]
pub enum UclabError {
    /// Inputs violate a documented precondition (mismatched grids, empty
    /// samplings, parameter out of range, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A numerical procedure failed to reach its tolerance (singular system,
    /// quadrature non-convergence, insufficient truncation).
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A constructed object violates one of its invariants beyond tolerance.
    #[error("invariant violation: {0}")]
    Invariant(String),

    /// Degenerate data that makes the requested quantity meaningless
    /// (zero denominators, null data slices, nothing to fit).
    #[error("degenerate data: {0}")]
    Degenerate(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, UclabError>;

impl UclabError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        UclabError::InvalidInput(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        UclabError::Numerical(msg.into())
    }

    pub fn invariant(msg: impl Into<String>) -> Self {
        UclabError::Invariant(msg.into())
    }

    pub fn degenerate(msg: impl Into<String>) -> Self {
        UclabError::Degenerate(msg.into())
    }
}
