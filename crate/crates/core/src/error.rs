//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by graph construction, the SDP solver, certificate
/// verification, and realization handling.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Exhaustive independence-number search refused for large graphs.
    #[error(
        "graph has n = {n} vertices, above the exhaustive-search limit {limit}; \
         for odd cycles with unit weights the bound is (n-1)/2 in closed form"
    )]
    SizeLimit { n: usize, limit: usize },

    #[error("matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:e}")]
    NotPsd { min_eigenvalue: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A vector pair in a realization violates the exclusivity orthogonality.
    #[error("realization violates orthogonality on edge ({i},{j}): |<u_i,u_j>| = {overlap:e}")]
    InfeasibleRealization { i: usize, j: usize, overlap: f64 },

    /// The handle overlaps a projector vector too weakly for self-testing to
    /// be defined (X_ii ~ |<u_0,u_i>|^2 is numerically zero).
    #[error("degenerate handle overlap at vertex {vertex}: X_ii = {value:e}")]
    DegenerateOverlap { vertex: usize, value: f64 },

    /// Certification of a non-cycle graph requires a caller-supplied dual.
    #[error("no dual certificate construction for this graph; supply a candidate dual")]
    UnsupportedWithoutCertificate,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
