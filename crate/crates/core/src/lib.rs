//! Numerical testbench for the no-signalling principle under hypothetical
//! single- and two-qubit gate machines.
//!
//! Quantum mechanics forbids faster-than-light communication: no operation Bob
//! performs on his half of a shared entangled state can change Alice's reduced
//! density matrix, and no choice of measurement basis Alice makes can change
//! the mixture Bob ends up holding. A number of famous "impossible machines" —
//! universal cloners, universal deleters, and exact NOT / Y / Z / Hadamard /
//! C-NOT gates defined simultaneously on two incompatible bases — would break
//! exactly that rule, which is one way of seeing why they cannot exist.
//!
//! This crate makes those arguments executable:
//!
//! * [`linalg`] — dense complex vectors/matrices, tensor products, a
//!   self-contained cyclic Jacobi eigensolver for Hermitian matrices, and the
//!   trace norm built on it.
//! * [`quantum`] — kets over qudit factors, Bloch-angle qubit bases, singlet
//!   construction, density matrices, partial trace, projective measurement,
//!   and the trace distance.
//! * [`machine`] — hypothetical machines expressed as *formal term rewrites*:
//!   rules match states by **name**, never by numeric value. That is the whole
//!   point: a rule table keyed on non-orthogonal named states is generally not
//!   the restriction of any linear operator, and the resulting reduced-density
//!   differences are what the scenarios measure.
//! * [`scenario`] — the eight machine scenarios, each comparing two reduced
//!   density matrices (before/after the rewrite, or under Alice's two
//!   measurement bases) and reporting the trace distance plus a residual
//!   against independently coded closed-form matrices.
//! * [`sweep`] — parameter grids over scenario configurations, with optional
//!   minimization over machine phases, used e.g. to show the NOT machine is
//!   only consistent on a great circle of the Bloch sphere.
//! * [`sample`] — deterministic pseudo-random states/bases/unitaries for the
//!   randomized physical baselines (genuine unitaries never signal).
//! * [`oracle`] — closed-form characteristic-polynomial eigenvalues for 2x2
//!   and 3x3 Hermitian matrices; an independent route used only to cross-check
//!   the Jacobi solver in verification suites.
//!
//! The crate is `no_std` (with `alloc`); everything IO-shaped lives in the
//! companion `nosig` binary crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod error;
pub mod linalg;
pub mod machine;
pub mod oracle;
pub mod quantum;
pub mod sample;
pub mod scenario;
pub mod sweep;
pub mod tol;

pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector, Complex};
pub use quantum::{BlochAngles, DensityMatrix, Ensemble, Ket, QubitBasis};
pub use scenario::{run_scenario, ScenarioConfig, ScenarioKind, SignallingReport, Verdict};
