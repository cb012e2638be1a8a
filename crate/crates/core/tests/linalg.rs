//! Eigensolver and matrix-algebra checks, cross-validated against the
//! independent characteristic-polynomial references in `oracle`.

use nosig_core::linalg::{c64, hermitian_eigen, hermitian_eigenvalues, trace_norm, CMatrix};
use nosig_core::oracle::{hermitian_eigenvalues_2x2, hermitian_eigenvalues_3x3};
use nosig_core::sample::{random_hermitian, Rng};
use proptest::prelude::*;

fn diag(values: &[f64]) -> CMatrix {
    let mut m = CMatrix::zeros(values.len(), values.len());
    for (i, &v) in values.iter().enumerate() {
        m.set(i, i, c64(v, 0.0));
    }
    m
}

#[test]
fn jacobi_matches_quadratic_oracle() {
    let mut rng = Rng::new(0x2b992ddf);
    for _ in 0..200 {
        let m = random_hermitian(&mut rng, 2);
        let iterative = hermitian_eigenvalues(&m).unwrap();
        let reference = hermitian_eigenvalues_2x2(&m).unwrap();
        for (a, b) in iterative.iter().zip(reference.iter()) {
            assert!((a - b).abs() < 1e-10, "2x2 mismatch: {a} vs {b}");
        }
    }
}

#[test]
fn jacobi_matches_cubic_oracle() {
    let mut rng = Rng::new(0x5851f42d);
    for _ in 0..200 {
        let m = random_hermitian(&mut rng, 3);
        let iterative = hermitian_eigenvalues(&m).unwrap();
        let reference = hermitian_eigenvalues_3x3(&m).unwrap();
        for (a, b) in iterative.iter().zip(reference.iter()) {
            assert!((a - b).abs() < 1e-9, "3x3 mismatch: {a} vs {b}");
        }
    }
}

#[test]
fn trace_norm_of_known_matrix() {
    // diag(3, -4, 0) has trace norm 7 regardless of basis rotation.
    let m = diag(&[3.0, -4.0, 0.0]);
    assert!((trace_norm(&m).unwrap() - 7.0).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn eigen_decomposition_reconstructs_the_matrix(seed in any::<u64>(), n in 2usize..=8) {
        let mut rng = Rng::new(seed);
        let m = random_hermitian(&mut rng, n);
        let (values, vectors) = hermitian_eigen(&m).unwrap();

        // Ascending order.
        for pair in values.windows(2) {
            prop_assert!(pair[0] <= pair[1]);
        }

        // V is unitary.
        let vtv = vectors.adjoint().matmul(&vectors).unwrap();
        prop_assert!(vtv.max_abs_diff(&CMatrix::identity(n)).unwrap() < 1e-10);

        // V diag(values) adj(V) recovers the input.
        let rebuilt = vectors
            .matmul(&diag(&values))
            .unwrap()
            .matmul(&vectors.adjoint())
            .unwrap();
        prop_assert!(rebuilt.max_abs_diff(&m).unwrap() < 1e-9);
    }

    #[test]
    fn trace_norm_is_absolutely_homogeneous(seed in any::<u64>(), scale in -25.0f64..25.0) {
        let mut rng = Rng::new(seed);
        let m = random_hermitian(&mut rng, 4);
        let base = trace_norm(&m).unwrap();
        let scaled = trace_norm(&m.scale(c64(scale, 0.0))).unwrap();
        prop_assert!((scaled - scale.abs() * base).abs() < 1e-9 * (1.0 + base));
    }

    #[test]
    fn matrix_tensor_product_is_associative(seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        let a = random_hermitian(&mut rng, 2);
        let b = random_hermitian(&mut rng, 2);
        let c = random_hermitian(&mut rng, 3);
        let left = a.tensor(&b).tensor(&c);
        let right = a.tensor(&b.tensor(&c));
        prop_assert!(left.max_abs_diff(&right).unwrap() < 1e-12);
    }

    #[test]
    fn tensor_product_multiplies_traces(seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        let a = random_hermitian(&mut rng, 3);
        let b = random_hermitian(&mut rng, 2);
        let product = a.tensor(&b).trace().unwrap();
        let separate = a.trace().unwrap() * b.trace().unwrap();
        prop_assert!((product - separate).norm() < 1e-10);
    }
}
