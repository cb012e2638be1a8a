//! Error vocabulary shared by every module of the crate.

use alloc::string::String;
use core::fmt;

/// Anything that can go wrong while building states, machines, or scenarios.
///
/// Variants are deliberately specific so callers (and the CLI's exit-code
/// mapping) can distinguish configuration mistakes from runtime failures.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A matrix operation needed a square matrix.
    NotSquare { rows: usize, cols: usize },
    /// A Hermitian-only operation received a matrix with `|m[i][j] - conj(m[j][i])|`
    /// above tolerance.
    NotHermitian { asymmetry: f64 },
    /// A scalar parameter fell outside its documented range.
    OutOfRange { what: &'static str, value: f64 },
    /// A qubit-only operation received a state of the wrong dimension.
    NotAQubit { dim: usize },
    /// A state vector's norm differed from 1 beyond tolerance.
    NotNormalized { norm: f64 },
    /// A subsystem index was out of range or repeated.
    BadSubsystemIndex { index: usize },
    /// A set of vectors failed an orthonormality or completeness check.
    NotOrthonormal { detail: &'static str },
    /// An ensemble operation needs at least one member.
    EmptyEnsemble,
    /// Two objects that must share a dimension (or dimension list) did not.
    DimMismatch { left: usize, right: usize },
    /// A rewrite was asked for a named state the machine has no rule for.
    UnmatchedTerm { name: String },
    /// A scenario or machine configuration is invalid.
    BadConfig { reason: String },
    /// A decomposition or sweep specification is invalid.
    BadSpec { reason: String },
    /// The requested scenario kind has no published closed-form reduced matrix.
    NoClosedForm { kind: &'static str },
    /// The iterative eigensolver failed to converge (should not happen for
    /// Hermitian input; reported rather than silently returning garbage).
    NoConvergence { sweeps: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotSquare { rows, cols } => {
                write!(f, "matrix is not square ({rows}x{cols})")
            }
            Error::NotHermitian { asymmetry } => {
                write!(f, "matrix is not Hermitian (max asymmetry {asymmetry:e})")
            }
            Error::OutOfRange { what, value } => {
                write!(f, "parameter {what} out of range: {value}")
            }
            Error::NotAQubit { dim } => {
                write!(f, "expected a single qubit, got dimension {dim}")
            }
            Error::NotNormalized { norm } => {
                write!(f, "state is not normalized (norm {norm})")
            }
            Error::BadSubsystemIndex { index } => {
                write!(f, "bad subsystem index {index}")
            }
            Error::NotOrthonormal { detail } => {
                write!(f, "vectors are not an orthonormal basis: {detail}")
            }
            Error::EmptyEnsemble => write!(f, "ensemble has no members"),
            Error::DimMismatch { left, right } => {
                write!(f, "dimension mismatch: {left} vs {right}")
            }
            Error::UnmatchedTerm { name } => {
                write!(f, "no rewrite rule matches state '{name}'")
            }
            Error::BadConfig { reason } => write!(f, "invalid configuration: {reason}"),
            Error::BadSpec { reason } => write!(f, "invalid specification: {reason}"),
            Error::NoClosedForm { kind } => {
                write!(f, "scenario '{kind}' has no closed-form reduced matrix")
            }
            Error::NoConvergence { sweeps } => {
                write!(f, "eigensolver did not converge after {sweeps} sweeps")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
