//! Independent closed-form eigenvalue references for 2x2 and 3x3 Hermitian
//! matrices, used to cross-check the iterative eigensolver. These follow the
//! characteristic polynomial directly and share no code with the Jacobi
//! routine.

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, Complex};
use crate::tol::HERMITICITY_TOL;

const PI: f64 = core::f64::consts::PI;

fn check_hermitian(m: &CMatrix, n: usize) -> Result<()> {
    if !m.is_square() || m.rows() != n {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let asym = m.hermitian_asymmetry()?;
    if asym > HERMITICITY_TOL {
        return Err(Error::NotHermitian { asymmetry: asym });
    }
    Ok(())
}

/// Eigenvalues (ascending) of a 2x2 Hermitian matrix, from the quadratic
/// characteristic polynomial.
pub fn hermitian_eigenvalues_2x2(m: &CMatrix) -> Result<[f64; 2]> {
    check_hermitian(m, 2)?;
    let a = m.get(0, 0).re;
    let d = m.get(1, 1).re;
    let b = m.get(0, 1).norm();
    let mid = 0.5 * (a + d);
    let radius = libm::sqrt(0.25 * (a - d) * (a - d) + b * b);
    Ok([mid - radius, mid + radius])
}

fn det3(m: &CMatrix) -> Complex {
    let g = |i: usize, j: usize| m.get(i, j);
    g(0, 0) * (g(1, 1) * g(2, 2) - g(1, 2) * g(2, 1))
        - g(0, 1) * (g(1, 0) * g(2, 2) - g(1, 2) * g(2, 0))
        + g(0, 2) * (g(1, 0) * g(2, 1) - g(1, 1) * g(2, 0))
}

/// Eigenvalues (ascending) of a 3x3 Hermitian matrix, via the trigonometric
/// solution of the cubic characteristic polynomial.
pub fn hermitian_eigenvalues_3x3(m: &CMatrix) -> Result<[f64; 3]> {
    check_hermitian(m, 3)?;
    let off = m.get(0, 1).norm_sqr() + m.get(0, 2).norm_sqr() + m.get(1, 2).norm_sqr();
    let d0 = m.get(0, 0).re;
    let d1 = m.get(1, 1).re;
    let d2 = m.get(2, 2).re;
    if off == 0.0 {
        let mut out = [d0, d1, d2];
        out.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
        return Ok(out);
    }
    let q = (d0 + d1 + d2) / 3.0;
    let p2 = (d0 - q) * (d0 - q) + (d1 - q) * (d1 - q) + (d2 - q) * (d2 - q) + 2.0 * off;
    let p = libm::sqrt(p2 / 6.0);
    let mut shifted = m.clone();
    for i in 0..3 {
        let v = shifted.get(i, i) - Complex::new(q, 0.0);
        shifted.set(i, i, v);
    }
    let b = shifted.scale(Complex::new(1.0 / p, 0.0));
    let r = (det3(&b) * 0.5).re;
    let r = r.clamp(-1.0, 1.0);
    let phi = libm::acos(r) / 3.0;
    let hi = q + 2.0 * p * libm::cos(phi);
    let lo = q + 2.0 * p * libm::cos(phi + 2.0 * PI / 3.0);
    let mid = 3.0 * q - hi - lo;
    Ok([lo, mid, hi])
}
