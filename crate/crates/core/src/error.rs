use thiserror::Error;

/// Errors raised by the algebraic and numeric layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Operands disagree on resonance order or grading scheme.
    #[error("structural mismatch: {0}")]
    Structure(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// A normalization hypothesis fails; the payload names it.
    #[error("degenerate input: {0}")]
    Degeneracy(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("input is not area-preserving: {0}")]
    NotAreaPreserving(String),

    #[error("parameters lie on the boundary curve {0}")]
    OnBoundary(String),
}

pub type Result<T> = std::result::Result<T, Error>;
