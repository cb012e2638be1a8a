//! The acceptance gate: one test per claim the project stands on, each
//! printing the same pass/fail line `nosig selftest` would (run with
//! `-- --nocapture` to see them all on success).

use nosig::selftest::{self, CheckOutcome};

fn check(outcome: CheckOutcome) {
    println!("{}", outcome.line());
    assert!(outcome.passed, "{}: {}", outcome.label, outcome.detail);
}

#[test]
fn physical_operations_never_signal() {
    check(selftest::physical_operations_cannot_signal(0));
}

#[test]
fn shared_state_is_basis_invariant() {
    check(selftest::shared_state_is_basis_invariant(0));
}

#[test]
fn duplication_demo_distance_is_pinned() {
    check(selftest::duplication_demonstration());
}

#[test]
fn phase_flip_demo_distance_is_pinned() {
    check(selftest::phase_flip_demonstration());
}

#[test]
fn flip_machine_boundary_is_the_real_great_circle() {
    check(selftest::flip_boundary());
}

#[test]
fn generic_defaults_signal_and_degenerate_configs_do_not() {
    check(selftest::generic_configs_signal());
}

#[test]
fn closed_forms_agree_with_the_simulation() {
    check(selftest::closed_forms_agree(0));
}

#[test]
fn metric_axioms_hold_and_eigensolver_matches_oracle() {
    check(selftest::metric_and_eigensolver(0));
}

#[test]
fn machine_readable_output_contract_holds() {
    check(selftest::output_contract());
}
