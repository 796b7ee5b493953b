//! Error type shared by every module of the crate.

use thiserror::Error;

/// Failures reported by the library. Every variant carries enough context to
/// be printed directly by the command-line driver.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument violates the documented precondition of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A geometric-series node `Σ λ^j` was evaluated at a point with `λ(s) = 1`.
    #[error("not evaluable at the given point: {0}")]
    NotEvaluableAt(String),
    /// A torus point is not regular (some root takes the value 1, or `a = ±1`).
    #[error("torus point is not regular: {0}")]
    NotRegular(String),
    /// A sequence of truncations did not stabilise inside the requested window.
    #[error("sequence did not converge: {0}")]
    NotConverged(String),
    /// Values of the sweep kept changing beyond the stable-regime threshold.
    #[error("sweep did not stabilise: {0}")]
    NotStabilized(String),
    /// An evaluation certificate could not be established.
    #[error("certificate rejected: {0}")]
    CertificateRejected(String),
    /// Malformed textual or JSON input.
    #[error("parse error: {0}")]
    Parse(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
