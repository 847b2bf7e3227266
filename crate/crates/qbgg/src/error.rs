//! Error type shared by every module of the crate.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, QbggError>;

/// Every failure mode surfaced by the library.
///
/// Messages are lower-case and name the offending quantity so that CLI
/// reports and FFI callers can show them verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QbggError {
    /// Division by an exact zero.
    #[error("division by zero")]
    DivisionByZero,
    /// A Laurent series in the scaling parameter has a positive exponent.
    #[error("divergent limit: term of order t^{0} survives")]
    DivergentLimit(i32),
    /// Two oscillator polynomials live over different oscillator spaces.
    #[error("mismatched oscillator spaces: {0}")]
    MismatchedSpaces(String),
    /// A generator substitution does not preserve the canonical commutation relations.
    #[error("not an automorphism: {0}")]
    NotAnAutomorphism(String),
    /// A Fock trace with a twist weight equal to one.
    #[error("divergent trace: twist weight of pair {0} equals 1")]
    DivergentTrace(String),
    /// A twist lies on a reflection hyperplane.
    #[error("degenerate twist: root {0} evaluates to 1")]
    DegenerateTwist(String),
    /// A weight expected to be dominant integral is not.
    #[error("weight is not dominant integral: {0}")]
    NotDominant(String),
    /// Parameters outside the admissible range of an operation.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// A constructed module does not have the expected dimension.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch {
        /// Dimension predicted by the Weyl dimension formula.
        expected: usize,
        /// Dimension obtained by the construction.
        found: usize,
    },
    /// Exact root of a rational number does not exist.
    #[error("inexact root: {0}")]
    InexactRoot(String),
    /// Two operators that must commute do not.
    #[error("operators do not commute: {0}")]
    NonCommuting(String),
    /// A Lax matrix violates the highest-weight condition on the vacuum.
    #[error("vacuum is not a highest-weight vector: {0}")]
    NotHighestWeight(String),
    /// Malformed textual input (rationals, JSON, configuration).
    #[error("parse error: {0}")]
    Parse(String),
    /// Filesystem failure while writing a report.
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for QbggError {
    fn from(e: std::io::Error) -> Self {
        QbggError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for QbggError {
    fn from(e: serde_json::Error) -> Self {
        QbggError::Parse(e.to_string())
    }
}
