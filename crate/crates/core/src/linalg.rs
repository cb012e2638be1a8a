//! Dense complex vectors and matrices, sized for this crate's needs (every
//! matrix is 32x32 or smaller), plus the two nontrivial operations the rest of
//! the crate is built on: a cyclic Jacobi eigensolver for Hermitian matrices
//! and the trace norm derived from it.
//!
//! The types are deliberately simple `Vec`-backed values with row-major
//! storage; there is no BLAS, no panic-prone indexing sugar, and no dependency
//! beyond the complex scalar itself.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol::{EIG_TOL, HERMITICITY_TOL};

/// Complex scalar used throughout the crate.
pub type Complex = Complex64;

/// Shorthand for `Complex::new`.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

/// A dense complex column vector.
#[derive(Debug, Clone, PartialEq)]
pub struct CVector {
    entries: Vec<Complex>,
}

impl CVector {
    pub fn new(entries: Vec<Complex>) -> Self {
        CVector { entries }
    }

    pub fn zeros(dim: usize) -> Self {
        CVector {
            entries: vec![Complex::ZERO; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize) -> Complex {
        self.entries[i]
    }

    pub fn set(&mut self, i: usize, value: Complex) {
        self.entries[i] = value;
    }

    pub fn as_slice(&self) -> &[Complex] {
        &self.entries
    }

    /// Inner product `<self|other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &CVector) -> Result<Complex> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.entries.iter().map(|a| a.norm_sqr()).sum())
    }

    pub fn scale(&self, factor: Complex) -> CVector {
        CVector::new(self.entries.iter().map(|a| a * factor).collect())
    }

    pub fn add(&self, other: &CVector) -> Result<CVector> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(CVector::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        ))
    }

    /// Tensor (Kronecker) product; `self` is the more significant factor.
    pub fn tensor(&self, other: &CVector) -> CVector {
        let mut out = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.entries {
            for b in &other.entries {
                out.push(a * b);
            }
        }
        CVector::new(out)
    }

    /// Outer product `|self><other|`.
    pub fn outer(&self, other: &CVector) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim(), other.dim());
        for i in 0..self.dim() {
            for j in 0..other.dim() {
                m.set(i, j, self.entries[i] * other.entries[j].conj());
            }
        }
        m
    }

    pub fn is_finite(&self) -> bool {
        self.entries
            .iter()
            .all(|a| a.re.is_finite() && a.im.is_finite())
    }
}

/// A dense complex matrix in row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex>,
}

impl CMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimMismatch {
                left: entries.len(),
                right: rows * cols,
            });
        }
        Ok(CMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            entries: vec![Complex::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex::ONE);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: Complex) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn add(&self, other: &CMatrix) -> Result<CMatrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &CMatrix) -> Result<CMatrix> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &CMatrix,
        f: impl Fn(Complex, Complex) -> Complex,
    ) -> Result<CMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimMismatch {
                left: self.rows * self.cols,
                right: other.rows * other.cols,
            });
        }
        Ok(CMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn scale(&self, factor: Complex) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a * factor).collect(),
        }
    }

    pub fn matmul(&self, other: &CMatrix) -> Result<CMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimMismatch {
                left: self.cols,
                right: other.rows,
            });
        }
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == Complex::ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &CVector) -> Result<CVector> {
        if self.cols != v.dim() {
            return Err(Error::DimMismatch {
                left: self.cols,
                right: v.dim(),
            });
        }
        let mut out = CVector::zeros(self.rows);
        for i in 0..self.rows {
            let mut acc = Complex::ZERO;
            for j in 0..self.cols {
                acc += self.get(i, j) * v.get(j);
            }
            out.set(i, acc);
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn trace(&self) -> Result<Complex> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok((0..self.rows).map(|i| self.get(i, i)).sum())
    }

    /// Tensor (Kronecker) product; `self` is the more significant factor.
    pub fn tensor(&self, other: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, a * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    /// Largest `|m[i][j] - conj(m[j][i])|` over all entries.
    pub fn hermitian_asymmetry(&self) -> Result<f64> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                if d > worst {
                    worst = d;
                }
            }
        }
        Ok(worst)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        matches!(self.hermitian_asymmetry(), Ok(a) if a <= tol)
    }

    /// Largest entrywise absolute difference between two equal-shaped matrices.
    pub fn max_abs_diff(&self, other: &CMatrix) -> Result<f64> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimMismatch {
                left: self.rows * self.cols,
                right: other.rows * other.cols,
            });
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn is_finite(&self) -> bool {
        self.entries
            .iter()
            .all(|a| a.re.is_finite() && a.im.is_finite())
    }

    fn off_diagonal_frobenius(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j {
                    acc += self.get(i, j).norm_sqr();
                }
            }
        }
        libm::sqrt(acc)
    }
}

/// Hard cap on Jacobi sweeps. Hermitian input converges quadratically and in
/// practice needs fewer than ten sweeps at these dimensions.
const MAX_JACOBI_SWEEPS: usize = 60;

/// Eigenvalues (ascending) and a unitary matrix of column eigenvectors for a
/// Hermitian matrix, computed by cyclic Jacobi rotations.
///
/// One complex rotation in the `(p, q)` plane annihilates the pivot entry
/// exactly; sweeps repeat until the off-diagonal Frobenius norm drops below
/// [`EIG_TOL`]. The input is validated against [`HERMITICITY_TOL`] and then
/// symmetrized, so representational noise cannot leak into the iteration.
pub fn hermitian_eigen(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let asym = m.hermitian_asymmetry()?;
    if asym > HERMITICITY_TOL {
        return Err(Error::NotHermitian { asymmetry: asym });
    }
    let n = m.rows;
    // Work on the exactly-Hermitian average of the matrix and its adjoint.
    let mut a = m.add(&m.adjoint())?.scale(c64(0.5, 0.0));
    let mut v = CMatrix::identity(n);

    for _sweep in 0..MAX_JACOBI_SWEEPS {
        if a.off_diagonal_frobenius() < EIG_TOL {
            return Ok(sorted_eigen(&a, v));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let r = apq.norm();
                // Entries this small cannot push the off-diagonal norm over
                // the convergence threshold; rotating on them is wasted work.
                if r < EIG_TOL * 1e-4 {
                    continue;
                }
                let beta = apq.arg();
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let theta = 0.5 * libm::atan2(2.0 * r, aqq - app);
                let (s, c) = (libm::sin(theta), libm::cos(theta));
                let e = Complex::from_polar(1.0, beta);
                let e_conj = e.conj();

                // Column update: B = A * J with J[p][p]=c, J[p][q]=s,
                // J[q][p]=-s*conj(e), J[q][q]=c*conj(e).
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, akp * c - akq * (s * e_conj));
                    a.set(k, q, akp * s + akq * (c * e_conj));
                }
                // Row update: A' = adj(J) * B.
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, apk * c - aqk * (s * e));
                    a.set(q, k, apk * s + aqk * (c * e));
                }
                // The pivot is annihilated by construction; write the exact
                // zero so rounding residue cannot accumulate.
                a.set(p, q, Complex::ZERO);
                a.set(q, p, Complex::ZERO);
                let dpp = a.get(p, p);
                let dqq = a.get(q, q);
                a.set(p, p, c64(dpp.re, 0.0));
                a.set(q, q, c64(dqq.re, 0.0));

                // Accumulate eigenvectors: V = V * J.
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, vkp * c - vkq * (s * e_conj));
                    v.set(k, q, vkp * s + vkq * (c * e_conj));
                }
            }
        }
    }
    if a.off_diagonal_frobenius() < EIG_TOL {
        return Ok(sorted_eigen(&a, v));
    }
    Err(Error::NoConvergence {
        sweeps: MAX_JACOBI_SWEEPS,
    })
}

fn sorted_eigen(a: &CMatrix, v: CMatrix) -> (Vec<f64>, CMatrix) {
    let n = a.rows;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a.get(i, i)
            .re
            .partial_cmp(&a.get(j, j).re)
            .unwrap_or(core::cmp::Ordering::Equal)
    });
    let values: Vec<f64> = order.iter().map(|&i| a.get(i, i).re).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for k in 0..n {
            vectors.set(k, new_col, v.get(k, old_col));
        }
    }
    (values, vectors)
}

/// Eigenvalues only (ascending) of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Result<Vec<f64>> {
    hermitian_eigen(m).map(|(values, _)| values)
}

/// Trace norm (sum of absolute eigenvalues) of a Hermitian matrix.
pub fn trace_norm(m: &CMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(m)?
        .iter()
        .map(|l| libm::fabs(*l))
        .sum())
}
