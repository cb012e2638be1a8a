//! Deterministic random generation of states and operators for self-tests and
//! property checks.
//!
//! The generator is SplitMix64, chosen because it is tiny, seedable, and
//! produces the same stream on every platform — reruns with the same seed are
//! bit-identical, which the self-test relies on.

use alloc::vec::Vec;

use crate::linalg::{c64, CMatrix, CVector, Complex};
use crate::quantum::{BlochAngles, DensityMatrix, Ket, QubitBasis};

const PI: f64 = core::f64::consts::PI;

/// SplitMix64 stream.
#[derive(Debug, Clone)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Standard normal via Box-Muller.
    pub fn normal(&mut self) -> f64 {
        let u = (1.0 - self.next_f64()).max(f64::MIN_POSITIVE);
        let v = self.next_f64();
        libm::sqrt(-2.0 * libm::log(u)) * libm::cos(2.0 * PI * v)
    }
}

/// Uniform direction on the Bloch sphere.
pub fn random_bloch(rng: &mut Rng) -> BlochAngles {
    let theta = libm::acos(1.0 - 2.0 * rng.next_f64());
    let phi = rng.uniform(0.0, 2.0 * PI);
    BlochAngles::new(theta, phi).expect("sampled angles lie in range")
}

pub fn random_qubit_basis(rng: &mut Rng) -> QubitBasis {
    QubitBasis::from_bloch(random_bloch(rng))
}

/// Haar-like random pure state: complex normal amplitudes, normalized.
pub fn random_ket(rng: &mut Rng, dims: &[usize]) -> Ket {
    let total: usize = dims.iter().product();
    let mut amps = CVector::zeros(total);
    loop {
        for i in 0..total {
            amps.set(i, c64(rng.normal(), rng.normal()));
        }
        let norm = amps.norm();
        if norm > 1e-6 {
            let scaled = amps.scale(c64(1.0 / norm, 0.0));
            return Ket::new(dims.to_vec(), scaled).expect("normalized by construction");
        }
    }
}

/// Random unitary built from a full cycle of complex plane rotations with
/// random angles and phases, followed by a random diagonal phase layer.
pub fn random_unitary(rng: &mut Rng, n: usize) -> CMatrix {
    let mut u = CMatrix::identity(n);
    for p in 0..n {
        for q in (p + 1)..n {
            let theta = rng.uniform(0.0, 2.0 * PI);
            let beta = rng.uniform(0.0, 2.0 * PI);
            let (s, c) = (libm::sin(theta), libm::cos(theta));
            let e = Complex::from_polar(1.0, beta);
            // Right-multiply by the rotation acting in the (p, q) plane.
            for k in 0..n {
                let ukp = u.get(k, p);
                let ukq = u.get(k, q);
                u.set(k, p, ukp * c - ukq * (s * e.conj()));
                u.set(k, q, ukp * s + ukq * (c * e.conj()));
            }
        }
    }
    for k in 0..n {
        let phase = Complex::from_polar(1.0, rng.uniform(0.0, 2.0 * PI));
        for row in 0..n {
            let v = u.get(row, k) * phase;
            u.set(row, k, v);
        }
    }
    u
}

/// Random Hermitian matrix with normal entries.
pub fn random_hermitian(rng: &mut Rng, n: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    for i in 0..n {
        m.set(i, i, c64(rng.normal(), 0.0));
        for j in (i + 1)..n {
            let v = c64(rng.normal(), rng.normal());
            m.set(i, j, v);
            m.set(j, i, v.conj());
        }
    }
    m
}

/// Random full-rank-ish mixed state: a mixture of `dim` random pure states
/// with strictly positive weights.
pub fn random_density(rng: &mut Rng, dims: &[usize]) -> DensityMatrix {
    let total: usize = dims.iter().product();
    let mut weights: Vec<f64> = (0..total).map(|_| rng.next_f64() + 0.05).collect();
    let sum: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= sum;
    }
    let dim = total;
    let mut m = CMatrix::zeros(dim, dim);
    for &w in &weights {
        let ket = random_ket(rng, dims);
        let proj = ket.amplitudes().outer(ket.amplitudes()).scale(c64(w, 0.0));
        m = m.add(&proj).expect("equal dims");
    }
    DensityMatrix::new(dims.to_vec(), m).expect("mixture of pure states is a valid state")
}
