//! Rewrite-system checks: formal sums materialize to the right numeric
//! states, name matching fails loudly, and the measure-then-rewrite route
//! agrees with rewriting the entangled state first.

use nosig_core::linalg::{c64, CMatrix};
use nosig_core::machine::{
    self, cloner_machine, default_f_map, general_op_machine, identity_machine, names, pair_name,
    StateRegistry, Term, TermDecomposition,
};
use nosig_core::quantum::{permute_subsystems, singlet_in_basis};
use nosig_core::sample::{random_qubit_basis, Rng};
use nosig_core::scenario::{double_singlet_decomposition, singlet_decomposition};
use nosig_core::{Ensemble, Error, Ket, QubitBasis};

fn two_basis_setup(rng: &mut Rng) -> (QubitBasis, QubitBasis, StateRegistry) {
    let b1 = random_qubit_basis(rng);
    let b2 = random_qubit_basis(rng);
    let mut registry = StateRegistry::new();
    machine::register_two_bases(&mut registry, &b1, &b2).unwrap();
    (b1, b2, registry)
}

/// Unitary sending the computational labels to a measurement basis:
/// |0> -> up, |1> -> down.
fn label_rotation(basis: &QubitBasis) -> CMatrix {
    let mut u = CMatrix::zeros(2, 2);
    for row in 0..2 {
        u.set(row, 0, basis.up().amplitudes().get(row));
        u.set(row, 1, basis.down().amplitudes().get(row));
    }
    u
}

#[test]
fn singlet_decomposition_materializes_to_the_singlet() {
    // The materialized state labels the sender's outcomes computationally;
    // rotating those labels into the measurement basis must reproduce the
    // shared state exactly.
    let mut rng = Rng::new(0xabcd01);
    for _ in 0..50 {
        let (b1, b2, registry) = two_basis_setup(&mut rng);
        for (index, basis) in [(0usize, &b1), (1usize, &b2)] {
            let formal = singlet_decomposition(index)
                .unwrap()
                .materialize(&registry)
                .unwrap();
            let rotation = label_rotation(basis).tensor(&CMatrix::identity(2));
            let rotated =
                Ket::new(vec![2, 2], rotation.mul_vec(formal.amplitudes()).unwrap()).unwrap();
            let direct = singlet_in_basis(basis);
            let diff = rotated
                .to_density()
                .matrix()
                .max_abs_diff(direct.to_density().matrix())
                .unwrap();
            assert!(diff < 1e-12, "rotated labels differ by {diff}");

            // The receiver's reduced state agrees even without the rotation.
            let local = formal.to_density().partial_trace(&[1]).unwrap();
            let expected = direct.to_density().partial_trace(&[1]).unwrap();
            let local_diff = local.matrix().max_abs_diff(expected.matrix()).unwrap();
            assert!(local_diff < 1e-12);
        }
    }
}

#[test]
fn double_singlet_decomposition_materializes_to_two_singlets() {
    let mut rng = Rng::new(0xabcd02);
    for _ in 0..20 {
        let basis = random_qubit_basis(&mut rng);
        let mut registry = StateRegistry::new();
        machine::register_basis_pairs(&mut registry, 0, &basis).unwrap();

        let formal = double_singlet_decomposition(0)
            .unwrap()
            .materialize(&registry)
            .unwrap();
        let u = label_rotation(&basis);
        let rotation = u.tensor(&u).tensor(&CMatrix::identity(4));
        let rotated = rotation.mul_vec(formal.amplitudes()).unwrap();

        // Two singlets shared pairwise, reordered to (senders..., receivers...).
        let pairwise = singlet_in_basis(&basis).tensor(&singlet_in_basis(&basis));
        let grouped = permute_subsystems(&pairwise, &[0, 2, 1, 3]).unwrap();

        assert_eq!(rotated.dim(), grouped.dim());
        for i in 0..rotated.dim() {
            let diff = (rotated.get(i) - grouped.amplitudes().get(i)).norm();
            assert!(diff < 1e-12, "amplitude {i} differs by {diff}");
        }
    }
}

#[test]
fn cloning_pipeline_equals_the_explicit_mixture() {
    let mut rng = Rng::new(0xabcd03);
    for _ in 0..50 {
        let (b1, b2, _) = two_basis_setup(&mut rng);
        let machine = cloner_machine(&b1, &b2).unwrap();
        for (index, basis) in [(0usize, &b1), (1usize, &b2)] {
            let named = singlet_decomposition(index)
                .unwrap()
                .collapse_named()
                .unwrap();
            let rho = machine
                .apply_to_named_ensemble(&named)
                .unwrap()
                .to_density()
                .unwrap();

            let expected = Ensemble::new(vec![
                (0.5, basis.up().tensor(basis.up())),
                (0.5, basis.down().tensor(basis.down())),
            ])
            .unwrap()
            .to_density()
            .unwrap();
            assert!(rho.matrix().max_abs_diff(expected.matrix()).unwrap() < 1e-12);
        }
    }
}

#[test]
fn measure_first_equals_rewrite_first_for_the_general_op() {
    // Rewriting the entangled state and then tracing out the sender must
    // agree with collapsing the sender's measurement first and rewriting the
    // mixture members.
    let mut rng = Rng::new(0xabcd04);
    for _ in 0..50 {
        let (b1, b2, _registry) = two_basis_setup(&mut rng);
        let machine = general_op_machine(&b1, &b2, &default_f_map(&b1, &b2).unwrap()).unwrap();
        for index in [0usize, 1] {
            let decomp = singlet_decomposition(index).unwrap();

            let rewritten = machine.apply_to_decomposition(&decomp).unwrap();
            let receiver_side: Vec<usize> = (1..rewritten.dims().len()).collect();
            let rewrite_first = rewritten
                .to_density()
                .partial_trace(&receiver_side)
                .unwrap();

            let measure_first = machine
                .apply_to_named_ensemble(&decomp.collapse_named().unwrap())
                .unwrap()
                .to_density()
                .unwrap();

            let diff = rewrite_first
                .matrix()
                .max_abs_diff(measure_first.matrix())
                .unwrap();
            assert!(diff < 1e-12, "routes disagree by {diff}");
        }
    }
}

#[test]
fn partial_tag_map_fails_on_the_unlisted_name() {
    let mut rng = Rng::new(0xabcd05);
    let (b1, b2, _) = two_basis_setup(&mut rng);
    let mut partial = default_f_map(&b1, &b2).unwrap();
    partial.remove(names::PSI2);
    partial.remove(names::PSI2_PERP);
    let machine = general_op_machine(&b1, &b2, &partial).unwrap();

    // First basis still works end to end.
    let named = singlet_decomposition(0).unwrap().collapse_named().unwrap();
    assert!(machine.apply_to_named_ensemble(&named).is_ok());

    // Second basis hits the missing rule and reports which name failed.
    let named = singlet_decomposition(1).unwrap().collapse_named().unwrap();
    match machine.apply_to_named_ensemble(&named) {
        Err(Error::UnmatchedTerm { name }) => {
            assert!(name == names::PSI2 || name == names::PSI2_PERP);
        }
        other => panic!("expected an unmatched-term error, got {other:?}"),
    }
}

#[test]
fn identity_machine_reproduces_the_materialized_state() {
    let mut rng = Rng::new(0xabcd06);
    let (_, _, registry) = two_basis_setup(&mut rng);
    let decomp = TermDecomposition::new(
        4,
        vec![
            Term::new(0, c64(0.5, 0.0), names::PSI1),
            Term::new(1, c64(0.5, 0.0), names::PSI1_PERP),
            Term::new(2, c64(0.5, 0.0), names::PSI2),
            Term::new(3, c64(0.5, 0.0), names::PSI2_PERP),
        ],
    )
    .unwrap();
    let all_names: Vec<String> = decomp.terms().iter().map(|t| t.name.clone()).collect();
    let machine = identity_machine(&registry, &all_names).unwrap();

    let rewritten = machine.apply_to_decomposition(&decomp).unwrap();
    let materialized = decomp.materialize(&registry).unwrap();
    for i in 0..rewritten.dim() {
        let diff = (rewritten.amplitudes().get(i) - materialized.amplitudes().get(i)).norm();
        assert!(diff < 1e-15);
    }
}

#[test]
fn pair_names_are_injective_for_sane_inputs() {
    assert_eq!(pair_name("a", "b"), "(a,b)");
    assert_ne!(pair_name("a", "b"), pair_name("b", "a"));
    let k = Ket::qubit(c64(1.0, 0.0), c64(0.0, 0.0)).unwrap();
    let mut registry = StateRegistry::new();
    registry.insert(pair_name("a", "b"), k.tensor(&k)).unwrap();
    assert!(registry.contains("(a,b)"));
}
