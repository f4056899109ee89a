//! Crate-wide error type.

/// Errors reported by state construction and the numerical operations.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Input sizes do not match the declared sector or each other.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A sector specification violates its invariants.
    #[error("invalid sector: {0}")]
    Sector(String),

    /// Two states that must share a sector do not.
    #[error("sector mismatch: {0}")]
    SectorMismatch(String),

    /// A vector that must be normalizable has (numerically) zero norm.
    #[error("zero vector: {0}")]
    ZeroVector(String),

    /// Subsystem or basis index out of range.
    #[error("index {index} out of range (bound {bound})")]
    Index { index: usize, bound: usize },

    /// An argument fails a precondition not covered by the variants above.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A spectra point lies outside the Kirwan polytope.
    #[error("point outside the Kirwan polytope: {0}")]
    OutsidePolytope(String),

    /// A numerical routine could not produce a reliable result.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Malformed JSON input.
    #[error("json parse error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
