//! Centralized numeric tolerances.
//!
//! Every comparison in the crate routes through these constants so the
//! acceptance thresholds live in exactly one place. They are deliberately
//! conservative for the dimensions involved (every matrix in the crate is
//! 32x32 or smaller).

/// Maximum allowed `|m[i][j] - conj(m[j][i])|` for a matrix accepted as Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Off-diagonal Frobenius norm at which the Jacobi eigensolver declares
/// convergence.
pub const EIG_TOL: f64 = 1e-12;

/// Generic entrywise equality tolerance for states and density matrices.
pub const EQUALITY_TOL: f64 = 1e-10;

/// Maximum allowed deviation of a state vector's norm from 1.
pub const NORM_TOL: f64 = 1e-12;

/// Measurement outcomes with probability below this are dropped from ensembles.
pub const PROB_EPSILON: f64 = 1e-14;

/// Default trace-distance threshold separating SIGNALLING from NO_SIGNALLING.
pub const DEFAULT_SIGNALLING_THRESHOLD: f64 = 1e-9;
