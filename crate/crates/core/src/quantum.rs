//! Quantum states and the operations the signalling analysis needs: Bloch-angle
//! qubit bases, multi-qubit kets, density matrices with validated invariants,
//! partial traces, projective measurement, and the trace distance.
//!
//! Composite indexing is big-endian throughout: in a tensor product the first
//! factor is the most significant digit of the composite index.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{c64, hermitian_eigenvalues, trace_norm, CMatrix, CVector, Complex};
use crate::tol::{EQUALITY_TOL, HERMITICITY_TOL, NORM_TOL, PROB_EPSILON};

const PI: f64 = core::f64::consts::PI;

/// A point on the Bloch sphere: polar angle in `[0, pi]`, azimuth in
/// `[0, 2*pi)`. Non-finite or out-of-range angles are rejected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochAngles {
    theta: f64,
    phi: f64,
}

impl BlochAngles {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !(0.0..=PI).contains(&theta) {
            return Err(Error::OutOfRange {
                what: "polar angle theta (expected [0, pi])",
                value: theta,
            });
        }
        if !phi.is_finite() || !(0.0..PI * 2.0).contains(&phi) {
            return Err(Error::OutOfRange {
                what: "azimuthal angle phi (expected [0, 2*pi))",
                value: phi,
            });
        }
        Ok(BlochAngles { theta, phi })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// A pure state of one or more subsystems, stored as a normalized amplitude
/// vector plus the list of subsystem dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    dims: Vec<usize>,
    amps: CVector,
}

impl Ket {
    /// Validates that the amplitude count matches the subsystem dimensions
    /// and that the state is normalized.
    pub fn new(dims: Vec<usize>, amps: CVector) -> Result<Self> {
        let total: usize = dims.iter().product();
        if dims.is_empty() || total != amps.dim() {
            return Err(Error::DimMismatch {
                left: total,
                right: amps.dim(),
            });
        }
        if !amps.is_finite() {
            return Err(Error::NotNormalized { norm: f64::NAN });
        }
        let norm = amps.norm();
        if libm::fabs(norm - 1.0) > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Ket { dims, amps })
    }

    /// Single-qubit ket from explicit amplitudes.
    pub fn qubit(a0: Complex, a1: Complex) -> Result<Self> {
        Ket::new(vec![2], CVector::new(vec![a0, a1]))
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Total Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.amps.dim()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amps
    }

    pub fn inner(&self, other: &Ket) -> Result<Complex> {
        self.amps.inner(&other.amps)
    }

    /// Tensor product; `self` becomes the more significant factor.
    pub fn tensor(&self, other: &Ket) -> Ket {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Ket {
            dims,
            amps: self.amps.tensor(&other.amps),
        }
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_ket(self)
    }
}

/// Qubit pointing along the Bloch direction:
/// `cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>`.
///
/// At the south pole (`theta == pi` exactly) the first amplitude is written as
/// an exact zero instead of the rounding residue of `cos(pi/2)`.
pub fn ket_from_bloch(angles: &BlochAngles) -> Ket {
    let (theta, phi) = (angles.theta, angles.phi);
    let phase = Complex::from_polar(1.0, phi);
    let amps = if theta == PI {
        vec![Complex::ZERO, phase]
    } else {
        vec![
            c64(libm::cos(theta / 2.0), 0.0),
            phase * libm::sin(theta / 2.0),
        ]
    };
    Ket {
        dims: vec![2],
        amps: CVector::new(amps),
    }
}

/// The state orthogonal to [`ket_from_bloch`] under this crate's fixed phase
/// convention: `sin(theta/2)|0> - e^{i phi} cos(theta/2)|1>`.
///
/// The poles are special-cased so that the complement of `|0>` is exactly
/// `|1>` and vice versa.
pub fn orthogonal_complement(angles: &BlochAngles) -> Ket {
    let (theta, phi) = (angles.theta, angles.phi);
    let amps = if theta == 0.0 {
        vec![Complex::ZERO, Complex::ONE]
    } else if theta == PI {
        vec![Complex::ONE, Complex::ZERO]
    } else {
        vec![
            c64(libm::sin(theta / 2.0), 0.0),
            Complex::from_polar(1.0, phi) * (-libm::cos(theta / 2.0)),
        ]
    };
    Ket {
        dims: vec![2],
        amps: CVector::new(amps),
    }
}

/// An orthonormal single-qubit basis generated from one Bloch direction: the
/// ket pointing along it and its fixed-convention orthogonal complement.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitBasis {
    angles: BlochAngles,
    up: Ket,
    down: Ket,
}

impl QubitBasis {
    pub fn from_bloch(angles: BlochAngles) -> Self {
        QubitBasis {
            angles,
            up: ket_from_bloch(&angles),
            down: orthogonal_complement(&angles),
        }
    }

    pub fn angles(&self) -> BlochAngles {
        self.angles
    }

    pub fn up(&self) -> &Ket {
        &self.up
    }

    pub fn down(&self) -> &Ket {
        &self.down
    }

    pub fn kets(&self) -> [&Ket; 2] {
        [&self.up, &self.down]
    }
}

/// The two-qubit singlet written in the given basis:
/// `(|k,kbar> - |kbar,k>) / sqrt(2)`.
///
/// Physically this is the same state for every basis (the reduced state on
/// either side is maximally mixed); only a global phase depends on the basis.
pub fn singlet_in_basis(basis: &QubitBasis) -> Ket {
    let up_down = basis.up.tensor(&basis.down);
    let down_up = basis.down.tensor(&basis.up);
    let amps = up_down
        .amps
        .add(&down_up.amps.scale(c64(-1.0, 0.0)))
        .expect("equal dims by construction")
        .scale(c64(1.0 / libm::sqrt(2.0), 0.0));
    Ket {
        dims: vec![2, 2],
        amps,
    }
}

/// A mixed state as a classical mixture of pure states.
#[derive(Debug, Clone)]
pub struct Ensemble {
    entries: Vec<(f64, Ket)>,
}

impl Ensemble {
    /// Validates that the ensemble is non-empty, that every weight is a valid
    /// probability, that the weights sum to one, and that all kets share the
    /// same subsystem layout.
    pub fn new(entries: Vec<(f64, Ket)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyEnsemble);
        }
        let dims = entries[0].1.dims.clone();
        let mut total = 0.0;
        for (p, ket) in &entries {
            if !p.is_finite() || *p < -PROB_EPSILON {
                return Err(Error::OutOfRange {
                    what: "ensemble probability",
                    value: *p,
                });
            }
            if ket.dims != dims {
                return Err(Error::DimMismatch {
                    left: entries[0].1.dim(),
                    right: ket.dim(),
                });
            }
            total += *p;
        }
        if libm::fabs(total - 1.0) > EQUALITY_TOL {
            return Err(Error::OutOfRange {
                what: "total ensemble probability",
                value: total,
            });
        }
        Ok(Ensemble { entries })
    }

    pub fn entries(&self) -> &[(f64, Ket)] {
        &self.entries
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        let dim = self.entries[0].1.dim();
        let mut m = CMatrix::zeros(dim, dim);
        for (p, ket) in &self.entries {
            let proj = ket.amps.outer(&ket.amps).scale(c64(*p, 0.0));
            m = m.add(&proj)?;
        }
        DensityMatrix::new(self.entries[0].1.dims.clone(), m)
    }
}

/// A validated density matrix together with its subsystem layout.
///
/// Construction checks Hermiticity, unit trace, positive semidefiniteness
/// (eigenvalues above `-1e-10`), and finiteness, so any value of this type can
/// be trusted downstream.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    matrix: CMatrix,
}

impl DensityMatrix {
    pub fn new(dims: Vec<usize>, matrix: CMatrix) -> Result<Self> {
        let total: usize = dims.iter().product();
        if dims.is_empty() || !matrix.is_square() || matrix.rows() != total {
            return Err(Error::DimMismatch {
                left: total,
                right: matrix.rows(),
            });
        }
        if !matrix.is_finite() {
            return Err(Error::OutOfRange {
                what: "density matrix entry",
                value: f64::NAN,
            });
        }
        let asym = matrix.hermitian_asymmetry()?;
        if asym > HERMITICITY_TOL {
            return Err(Error::NotHermitian { asymmetry: asym });
        }
        let trace = matrix.trace()?;
        if libm::fabs(trace.re - 1.0) > EQUALITY_TOL || libm::fabs(trace.im) > EQUALITY_TOL {
            return Err(Error::OutOfRange {
                what: "density matrix trace",
                value: trace.re,
            });
        }
        let eigenvalues = hermitian_eigenvalues(&matrix)?;
        if let Some(&least) = eigenvalues.first() {
            if least < -EQUALITY_TOL {
                return Err(Error::OutOfRange {
                    what: "density matrix eigenvalue",
                    value: least,
                });
            }
        }
        Ok(DensityMatrix { dims, matrix })
    }

    pub fn from_ket(ket: &Ket) -> DensityMatrix {
        // A validated ket always yields a valid projector.
        DensityMatrix {
            dims: ket.dims.clone(),
            matrix: ket.amps.outer(&ket.amps),
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        hermitian_eigenvalues(&self.matrix)
    }

    /// Traces out every subsystem not listed in `keep`.
    ///
    /// `keep` must be non-empty, strictly increasing, and in range; the result
    /// keeps the listed subsystems in their original order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(Error::BadSpec {
                reason: "partial trace must keep at least one subsystem".into(),
            });
        }
        for (i, &k) in keep.iter().enumerate() {
            if k >= self.dims.len() || (i > 0 && keep[i - 1] >= k) {
                return Err(Error::BadSubsystemIndex { index: k });
            }
        }
        let traced: Vec<usize> = (0..self.dims.len()).filter(|i| !keep.contains(i)).collect();
        let keep_dims: Vec<usize> = keep.iter().map(|&k| self.dims[k]).collect();
        let traced_dims: Vec<usize> = traced.iter().map(|&t| self.dims[t]).collect();
        let out_dim: usize = keep_dims.iter().product();
        let traced_dim: usize = traced_dims.iter().product();

        let mut out = CMatrix::zeros(out_dim, out_dim);
        let mut full_row = vec![0usize; self.dims.len()];
        let mut full_col = vec![0usize; self.dims.len()];
        for i in 0..out_dim {
            let ki = decompose(i, &keep_dims);
            for j in 0..out_dim {
                let kj = decompose(j, &keep_dims);
                let mut acc = Complex::ZERO;
                for t in 0..traced_dim {
                    let ti = decompose(t, &traced_dims);
                    for (slot, &sub) in keep.iter().enumerate() {
                        full_row[sub] = ki[slot];
                        full_col[sub] = kj[slot];
                    }
                    for (slot, &sub) in traced.iter().enumerate() {
                        full_row[sub] = ti[slot];
                        full_col[sub] = ti[slot];
                    }
                    acc += self.matrix.get(
                        compose(&full_row, &self.dims),
                        compose(&full_col, &self.dims),
                    );
                }
                out.set(i, j, acc);
            }
        }
        DensityMatrix::new(keep_dims, out)
    }

    /// Trace distance `0.5 * ||self - other||_1`.
    pub fn trace_distance(&self, other: &DensityMatrix) -> Result<f64> {
        let delta = self.matrix.sub(&other.matrix)?;
        Ok(0.5 * trace_norm(&delta)?)
    }
}

/// Projectively measures the listed subsystems in the given orthonormal basis
/// and returns the outcome ensemble on the remaining subsystems.
///
/// `measured` must be strictly increasing and must not cover every subsystem;
/// `outcomes` must be a complete orthonormal basis of the measured factor.
/// Outcomes with probability at or below [`PROB_EPSILON`] are dropped.
pub fn measure_subsystems(
    ket: &Ket,
    measured: &[usize],
    outcomes: &[Ket],
) -> Result<Vec<(f64, Ket)>> {
    let dims = ket.dims();
    if measured.is_empty() {
        return Err(Error::BadSpec {
            reason: "measurement must touch at least one subsystem".into(),
        });
    }
    for (i, &m) in measured.iter().enumerate() {
        if m >= dims.len() || (i > 0 && measured[i - 1] >= m) {
            return Err(Error::BadSubsystemIndex { index: m });
        }
    }
    if measured.len() == dims.len() {
        return Err(Error::BadSpec {
            reason: "measurement must leave at least one subsystem".into(),
        });
    }
    let kept: Vec<usize> = (0..dims.len()).filter(|i| !measured.contains(i)).collect();
    let measured_dims: Vec<usize> = measured.iter().map(|&m| dims[m]).collect();
    let kept_dims: Vec<usize> = kept.iter().map(|&k| dims[k]).collect();
    let measured_dim: usize = measured_dims.iter().product();
    let kept_dim: usize = kept_dims.iter().product();

    if outcomes.len() != measured_dim {
        return Err(Error::NotOrthonormal {
            detail: "measurement basis does not span the measured factor",
        });
    }
    for (i, a) in outcomes.iter().enumerate() {
        if a.dim() != measured_dim {
            return Err(Error::DimMismatch {
                left: measured_dim,
                right: a.dim(),
            });
        }
        for (j, b) in outcomes.iter().enumerate() {
            let overlap = a.inner(b)?;
            let expected = if i == j { 1.0 } else { 0.0 };
            if (overlap - expected).norm() > EQUALITY_TOL {
                return Err(Error::NotOrthonormal {
                    detail: "measurement basis kets are not orthonormal",
                });
            }
        }
    }

    let mut full = vec![0usize; dims.len()];
    let mut result = Vec::new();
    for outcome in outcomes {
        let mut amps = CVector::zeros(kept_dim);
        for r in 0..kept_dim {
            let ri = decompose(r, &kept_dims);
            let mut acc = Complex::ZERO;
            for m in 0..measured_dim {
                let mi = decompose(m, &measured_dims);
                for (slot, &sub) in kept.iter().enumerate() {
                    full[sub] = ri[slot];
                }
                for (slot, &sub) in measured.iter().enumerate() {
                    full[sub] = mi[slot];
                }
                acc +=
                    outcome.amplitudes().get(m).conj() * ket.amplitudes().get(compose(&full, dims));
            }
            amps.set(r, acc);
        }
        let norm = amps.norm();
        let p = norm * norm;
        if p <= PROB_EPSILON {
            continue;
        }
        let normalized = amps.scale(c64(1.0 / norm, 0.0));
        result.push((p, Ket::new(kept_dims.clone(), normalized)?));
    }
    Ok(result)
}

/// Reorders subsystems: slot `s` of the result is subsystem `order[s]` of the
/// input. `order` must be a permutation of the subsystem indices.
pub fn permute_subsystems(ket: &Ket, order: &[usize]) -> Result<Ket> {
    let dims = ket.dims();
    if order.len() != dims.len() {
        return Err(Error::DimMismatch {
            left: order.len(),
            right: dims.len(),
        });
    }
    let mut seen = vec![false; dims.len()];
    for &o in order {
        if o >= dims.len() || seen[o] {
            return Err(Error::BadSubsystemIndex { index: o });
        }
        seen[o] = true;
    }
    let new_dims: Vec<usize> = order.iter().map(|&o| dims[o]).collect();
    let total = ket.dim();
    let mut amps = CVector::zeros(total);
    let mut old = vec![0usize; dims.len()];
    for i in 0..total {
        let ni = decompose(i, &new_dims);
        for (slot, &o) in order.iter().enumerate() {
            old[o] = ni[slot];
        }
        amps.set(i, ket.amplitudes().get(compose(&old, dims)));
    }
    Ok(Ket {
        dims: new_dims,
        amps,
    })
}

/// Splits a composite index into per-subsystem digits, most significant first.
fn decompose(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0usize; dims.len()];
    for slot in (0..dims.len()).rev() {
        out[slot] = index % dims[slot];
        index /= dims[slot];
    }
    out
}

fn compose(indices: &[usize], dims: &[usize]) -> usize {
    let mut out = 0usize;
    for (i, &d) in dims.iter().enumerate() {
        out = out * d + indices[i];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn angles(theta: f64, phi: f64) -> BlochAngles {
        BlochAngles::new(theta, phi).unwrap()
    }

    #[test]
    fn bloch_angles_validate_ranges() {
        assert!(BlochAngles::new(-0.1, 0.0).is_err());
        assert!(BlochAngles::new(PI + 0.1, 0.0).is_err());
        assert!(BlochAngles::new(0.5, 2.0 * PI).is_err());
        assert!(BlochAngles::new(f64::NAN, 0.0).is_err());
        assert!(BlochAngles::new(0.5, f64::NAN).is_err());
    }

    #[test]
    fn poles_are_exact() {
        let north = ket_from_bloch(&angles(0.0, 1.3));
        assert_eq!(north.amplitudes().get(0), Complex::ONE);
        assert_eq!(north.amplitudes().get(1), Complex::ZERO);
        let south = ket_from_bloch(&angles(PI, 0.0));
        assert_eq!(south.amplitudes().get(0), Complex::ZERO);
        assert_eq!(south.amplitudes().get(1), Complex::ONE);

        let north_comp = orthogonal_complement(&angles(0.0, 1.3));
        assert_eq!(north_comp.amplitudes().get(0), Complex::ZERO);
        assert_eq!(north_comp.amplitudes().get(1), Complex::ONE);
        let south_comp = orthogonal_complement(&angles(PI, 2.2));
        assert_eq!(south_comp.amplitudes().get(0), Complex::ONE);
        assert_eq!(south_comp.amplitudes().get(1), Complex::ZERO);
    }

    #[test]
    fn basis_is_orthonormal() {
        let basis = QubitBasis::from_bloch(angles(1.1, 4.2));
        assert!((basis.up().inner(basis.up()).unwrap() - 1.0).norm() < 1e-14);
        assert!((basis.down().inner(basis.down()).unwrap() - 1.0).norm() < 1e-14);
        assert!(basis.up().inner(basis.down()).unwrap().norm() < 1e-14);
    }

    #[test]
    fn singlet_reduces_to_maximally_mixed() {
        let basis = QubitBasis::from_bloch(angles(2.0, 0.7));
        let rho = singlet_in_basis(&basis).to_density();
        for keep in [&[0usize][..], &[1usize][..]] {
            let reduced = rho.partial_trace(keep).unwrap();
            let half = CMatrix::identity(2).scale(c64(0.5, 0.0));
            assert!(reduced.matrix().max_abs_diff(&half).unwrap() < 1e-14);
        }
    }

    #[test]
    fn measurement_of_singlet_is_unbiased_and_anticorrelated() {
        let shared = QubitBasis::from_bloch(angles(0.9, 5.1));
        let joint = singlet_in_basis(&shared);
        let local = QubitBasis::from_bloch(angles(0.9, 5.1));
        let outcomes =
            measure_subsystems(&joint, &[0], &[local.up().clone(), local.down().clone()]).unwrap();
        assert_eq!(outcomes.len(), 2);
        for (p, remainder) in &outcomes {
            assert!((p - 0.5).abs() < 1e-12);
            assert_eq!(remainder.dims(), &[2]);
        }
        // Alice seeing "up" leaves Bob in "down" (up to phase) and vice versa.
        let overlap = outcomes[0].1.inner(local.down()).unwrap().norm();
        assert!((overlap - 1.0).abs() < 1e-12);
    }

    #[test]
    fn permutation_round_trips() {
        let a = ket_from_bloch(&angles(0.3, 0.1));
        let b = ket_from_bloch(&angles(1.4, 2.0));
        let c = ket_from_bloch(&angles(2.8, 4.4));
        let joint = a.tensor(&b).tensor(&c);
        let swapped = permute_subsystems(&joint, &[2, 0, 1]).unwrap();
        let back = permute_subsystems(&swapped, &[1, 2, 0]).unwrap();
        assert_eq!(back, joint);
        // Same products in a different association order, so compare within
        // rounding rather than bitwise.
        let direct = c.tensor(&a).tensor(&b);
        for i in 0..direct.dim() {
            let diff = (swapped.amplitudes().get(i) - direct.amplitudes().get(i)).norm();
            assert!(diff < 1e-15);
        }
    }

    #[test]
    fn density_validation_rejects_bad_inputs() {
        let mut not_trace_one = CMatrix::identity(2);
        not_trace_one.set(1, 1, c64(0.5, 0.0));
        assert!(DensityMatrix::new(vec![2], not_trace_one).is_err());

        let mut not_psd = CMatrix::zeros(2, 2);
        not_psd.set(0, 0, c64(1.5, 0.0));
        not_psd.set(1, 1, c64(-0.5, 0.0));
        assert!(matches!(
            DensityMatrix::new(vec![2], not_psd),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn trace_distance_of_orthogonal_pures_is_one() {
        let zero = ket_from_bloch(&angles(0.0, 0.0)).to_density();
        let one = ket_from_bloch(&angles(PI, 0.0)).to_density();
        assert!((zero.trace_distance(&one).unwrap() - 1.0).abs() < 1e-12);
        assert!(zero.trace_distance(&zero).unwrap() < 1e-12);
    }
}
