//! State-level physics checks: basis independence of the singlet, metric
//! behavior of the trace distance, Born-rule bookkeeping, and the two
//! foundational no-signalling facts (remote measurement and remote unitaries
//! leave the local reduced state alone).

use nosig_core::linalg::{c64, CMatrix};
use nosig_core::quantum::{
    measure_subsystems, singlet_in_basis, BlochAngles, DensityMatrix, Ensemble,
};
use nosig_core::sample::{random_density, random_ket, random_qubit_basis, random_unitary, Rng};
use nosig_core::QubitBasis;
use proptest::prelude::*;

const PI: f64 = std::f64::consts::PI;

#[test]
fn singlet_density_is_basis_independent() {
    let computational =
        singlet_in_basis(&QubitBasis::from_bloch(BlochAngles::new(0.0, 0.0).unwrap())).to_density();
    let mut rng = Rng::new(0xfeed5eed);
    for _ in 0..200 {
        let basis = random_qubit_basis(&mut rng);
        let rho = singlet_in_basis(&basis).to_density();
        let diff = rho.matrix().max_abs_diff(computational.matrix()).unwrap();
        assert!(diff < 1e-12, "singlet depends on basis: {diff}");
    }
}

#[test]
fn measurement_does_not_steer_the_remote_state() {
    // Whatever basis one side measures in, the mixture the other side holds
    // must equal its partial trace. 500 random joint states and bases.
    let mut rng = Rng::new(0x0b5e55ed);
    for round in 0..500 {
        let joint = random_ket(&mut rng, &[2, 2]);
        let basis = random_qubit_basis(&mut rng);
        let outcomes =
            measure_subsystems(&joint, &[0], &[basis.up().clone(), basis.down().clone()]).unwrap();
        let total: f64 = outcomes.iter().map(|(p, _)| p).sum();
        assert!((total - 1.0).abs() < 1e-10, "round {round}: mass {total}");

        let mixture = Ensemble::new(outcomes).unwrap().to_density().unwrap();
        let reduced = joint.to_density().partial_trace(&[1]).unwrap();
        let diff = mixture.matrix().max_abs_diff(reduced.matrix()).unwrap();
        assert!(diff < 1e-12, "round {round}: steering residual {diff}");
    }
}

#[test]
fn remote_unitary_leaves_local_state_unchanged() {
    let mut rng = Rng::new(0xcafe1234);
    for _ in 0..200 {
        let joint = random_ket(&mut rng, &[2, 2]);
        let u = random_unitary(&mut rng, 2);
        let full = CMatrix::identity(2).tensor(&u);
        let rotated_amps = full.mul_vec(joint.amplitudes()).unwrap();
        let rotated = nosig_core::Ket::new(vec![2, 2], rotated_amps).unwrap();

        let before = joint.to_density().partial_trace(&[0]).unwrap();
        let after = rotated.to_density().partial_trace(&[0]).unwrap();
        assert!(before.trace_distance(&after).unwrap() < 1e-12);
    }
}

#[test]
fn partial_trace_composes() {
    let mut rng = Rng::new(0x7ab1e5);
    for _ in 0..50 {
        let joint = random_ket(&mut rng, &[2, 2, 2]).to_density();
        let direct = joint.partial_trace(&[0]).unwrap();
        let staged = joint
            .partial_trace(&[0, 2])
            .unwrap()
            .partial_trace(&[0])
            .unwrap();
        assert!(direct.matrix().max_abs_diff(staged.matrix()).unwrap() < 1e-12);
    }
}

#[test]
fn partial_trace_of_product_state_factors() {
    let mut rng = Rng::new(0x00f00dbeef);
    for _ in 0..50 {
        let a = random_ket(&mut rng, &[2]);
        let b = random_ket(&mut rng, &[2]);
        let joint = a.tensor(&b).to_density();
        let left = joint.partial_trace(&[0]).unwrap();
        let diff = left.matrix().max_abs_diff(a.to_density().matrix()).unwrap();
        assert!(diff < 1e-13);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn trace_distance_is_a_bounded_metric(seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        let rho = random_density(&mut rng, &[2, 2]);
        let sigma = random_density(&mut rng, &[2, 2]);
        let tau = random_density(&mut rng, &[2, 2]);

        let d_rr = rho.trace_distance(&rho).unwrap();
        prop_assert!(d_rr.abs() < 1e-12);

        let d_rs = rho.trace_distance(&sigma).unwrap();
        let d_sr = sigma.trace_distance(&rho).unwrap();
        prop_assert!(d_rs >= 0.0 && d_rs <= 1.0 + 1e-12);
        prop_assert!((d_rs - d_sr).abs() < 1e-12);

        let d_rt = rho.trace_distance(&tau).unwrap();
        let d_st = sigma.trace_distance(&tau).unwrap();
        prop_assert!(d_rt <= d_rs + d_st + 1e-10);
    }

    #[test]
    fn orthogonal_pure_states_sit_at_distance_one(theta in 0.0..PI, phi in 0.0..2.0 * PI) {
        let basis = QubitBasis::from_bloch(BlochAngles::new(theta, phi).unwrap());
        let up = basis.up().to_density();
        let down = basis.down().to_density();
        prop_assert!((up.trace_distance(&down).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bloch_kets_are_normalized_and_complementary(theta in 0.0..PI, phi in 0.0..2.0 * PI) {
        let basis = QubitBasis::from_bloch(BlochAngles::new(theta, phi).unwrap());
        prop_assert!((basis.up().amplitudes().norm() - 1.0).abs() < 1e-12);
        prop_assert!((basis.down().amplitudes().norm() - 1.0).abs() < 1e-12);
        prop_assert!(basis.up().inner(basis.down()).unwrap().norm() < 1e-12);
    }

    #[test]
    fn ensemble_density_matches_weighted_projectors(seed in any::<u64>(), w in 0.05f64..0.95) {
        let mut rng = Rng::new(seed);
        let k1 = random_ket(&mut rng, &[2]);
        let k2 = random_ket(&mut rng, &[2]);
        let ensemble = Ensemble::new(vec![(w, k1.clone()), (1.0 - w, k2.clone())]).unwrap();
        let rho = ensemble.to_density().unwrap();
        let expected = k1
            .amplitudes()
            .outer(k1.amplitudes())
            .scale(c64(w, 0.0))
            .add(&k2.amplitudes().outer(k2.amplitudes()).scale(c64(1.0 - w, 0.0)))
            .unwrap();
        let expected = DensityMatrix::new(vec![2], expected).unwrap();
        prop_assert!(rho.matrix().max_abs_diff(expected.matrix()).unwrap() < 1e-12);
    }
}
