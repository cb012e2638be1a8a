//! The acceptance self-test suite: nine independent checks covering the
//! physical baselines, the pinned demonstration values, the boundary
//! manifolds, the closed-form cross-checks, the numerical toolbox, and the
//! machine-readable output contract. `nosig selftest` runs all of them and
//! prints one pass/fail line per check.

use std::f64::consts::PI;
use std::fmt::Write as _;

use nosig_core::linalg::hermitian_eigenvalues;
use nosig_core::oracle::{hermitian_eigenvalues_2x2, hermitian_eigenvalues_3x3};
use nosig_core::quantum::{measure_subsystems, singlet_in_basis, BlochAngles, QubitBasis};
use nosig_core::sample::{
    random_density, random_hermitian, random_ket, random_qubit_basis, random_unitary, Rng,
};
use nosig_core::scenario::{run_scenario, FlipParams, ScenarioConfig, ScenarioKind};
use nosig_core::sweep::{run_sweep, Axis, SweepSpec};
use nosig_core::{CMatrix, Ensemble, Ket, Verdict};

use crate::config::{cli_default, resolve, Overrides};
use crate::csv::render_csv;
use crate::report::{parse_report_array, render_json_array, ReportDoc};

/// Outcome of one acceptance check.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub label: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn pass(label: &'static str, detail: String) -> CheckOutcome {
        CheckOutcome {
            label,
            passed: true,
            detail,
        }
    }

    fn fail(label: &'static str, detail: String) -> CheckOutcome {
        CheckOutcome {
            label,
            passed: false,
            detail,
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{} {} — {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.label,
            self.detail
        )
    }
}

/// Runs every acceptance check with the given seed for the randomized ones.
pub fn run_all(seed: u64) -> Vec<CheckOutcome> {
    vec![
        physical_operations_cannot_signal(seed),
        shared_state_is_basis_invariant(seed),
        duplication_demonstration(),
        phase_flip_demonstration(),
        flip_boundary(),
        generic_configs_signal(),
        closed_forms_agree(seed),
        metric_and_eigensolver(seed),
        output_contract(),
    ]
}

/// Check 1: genuinely physical remote operations and measurements leave the
/// other party's reduced state exactly in place.
pub fn physical_operations_cannot_signal(seed: u64) -> CheckOutcome {
    const LABEL: &str = "physical operations cannot signal";
    let mut rng = Rng::new(seed ^ 0x1001);
    let mut worst_unitary = 0.0f64;
    for _ in 0..100 {
        let da = 2 + (rng.next_u64() % 3) as usize;
        let db = 2 + (rng.next_u64() % 3) as usize;
        let ket = random_ket(&mut rng, &[da, db]);
        let u = random_unitary(&mut rng, db);
        let rotated = CMatrix::identity(da)
            .tensor(&u)
            .mul_vec(ket.amplitudes())
            .and_then(|amps| Ket::new(vec![da, db], amps));
        let rotated = match rotated {
            Ok(k) => k,
            Err(e) => return CheckOutcome::fail(LABEL, format!("remote rotation failed: {e}")),
        };
        let before = ket.to_density().partial_trace(&[0]);
        let after = rotated.to_density().partial_trace(&[0]);
        match (before, after) {
            (Ok(b), Ok(a)) => match b.trace_distance(&a) {
                Ok(d) => worst_unitary = worst_unitary.max(d),
                Err(e) => return CheckOutcome::fail(LABEL, e.to_string()),
            },
            _ => return CheckOutcome::fail(LABEL, "partial trace failed".into()),
        }
    }

    let mut worst_measurement = 0.0f64;
    for _ in 0..500 {
        let db = 2 + (rng.next_u64() % 3) as usize;
        let ket = random_ket(&mut rng, &[2, db]);
        let basis = random_qubit_basis(&mut rng);
        let outcomes = [basis.up().clone(), basis.down().clone()];
        let steered = measure_subsystems(&ket, &[0], &outcomes)
            .and_then(Ensemble::new)
            .and_then(|e| e.to_density());
        let local = ket.to_density().partial_trace(&[1]);
        match (steered, local) {
            (Ok(s), Ok(l)) => match s.trace_distance(&l) {
                Ok(d) => worst_measurement = worst_measurement.max(d),
                Err(e) => return CheckOutcome::fail(LABEL, e.to_string()),
            },
            (Err(e), _) | (_, Err(e)) => return CheckOutcome::fail(LABEL, e.to_string()),
        }
    }

    let detail = format!(
        "100 remote unitaries (dims up to 4x4): worst distance {worst_unitary:.2e}; \
         500 remote measurements: worst steering {worst_measurement:.2e}"
    );
    if worst_unitary < 1e-10 && worst_measurement < 1e-10 {
        CheckOutcome::pass(LABEL, detail)
    } else {
        CheckOutcome::fail(LABEL, detail)
    }
}

/// Check 2: the shared antisymmetric state is the same density matrix no
/// matter which qubit basis expresses it.
pub fn shared_state_is_basis_invariant(seed: u64) -> CheckOutcome {
    const LABEL: &str = "shared state is basis invariant";
    let mut rng = Rng::new(seed ^ 0x1002);
    let computational = QubitBasis::from_bloch(match BlochAngles::new(0.0, 0.0) {
        Ok(a) => a,
        Err(e) => return CheckOutcome::fail(LABEL, e.to_string()),
    });
    let reference = singlet_in_basis(&computational).to_density();
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let basis = random_qubit_basis(&mut rng);
        let candidate = singlet_in_basis(&basis).to_density();
        match reference.trace_distance(&candidate) {
            Ok(d) => worst = worst.max(d),
            Err(e) => return CheckOutcome::fail(LABEL, e.to_string()),
        }
    }
    let detail = format!("1000 random bases: worst distance {worst:.2e}");
    if worst < 1e-10 {
        CheckOutcome::pass(LABEL, detail)
    } else {
        CheckOutcome::fail(LABEL, detail)
    }
}

/// Check 3: the duplication experiment's demonstration distance and its
/// machine-disabled baseline.
pub fn duplication_demonstration() -> CheckOutcome {
    const LABEL: &str = "duplication demonstration distance";
    let config = ScenarioConfig::default_for(ScenarioKind::Cloning);
    let report = match run_scenario(&config) {
        Ok(r) => r,
        Err(e) => return CheckOutcome::fail(LABEL, e.to_string()),
    };
    let mut baseline_config = config;
    baseline_config.machine_enabled = false;
    let baseline = match run_scenario(&baseline_config) {
        Ok(r) => r,
        Err(e) => return CheckOutcome::fail(LABEL, e.to_string()),
    };
    let detail = format!(
        "distance {:.12} (target 0.5 within 1e-9); disabled baseline {:.2e}",
        report.trace_distance, baseline.trace_distance
    );
    if (report.trace_distance - 0.5).abs() < 1e-9 && baseline.trace_distance < 1e-12 {
        CheckOutcome::pass(LABEL, detail)
    } else {
        CheckOutcome::fail(LABEL, detail)
    }
}

/// Check 4: the in-basis phase-flip experiment's demonstration distance and
/// its coincident-basis degeneracy.
pub fn phase_flip_demonstration() -> CheckOutcome {
    const LABEL: &str = "phase-flip demonstration distance";
    let config = ScenarioConfig::default_for(ScenarioKind::ZGate);
    let report = match run_scenario(&config) {
        Ok(r) => r,
        Err(e) => return CheckOutcome::fail(LABEL, e.to_string()),
    };
    let mut coincident = config;
    coincident.basis2 = coincident.basis1;
    let degenerate = match run_scenario(&coincident) {
        Ok(r) => r,
        Err(e) => return CheckOutcome::fail(LABEL, e.to_string()),
    };
    let target = 1.0 / 2.0f64.sqrt();
    let detail = format!(
        "distance {:.12} (target 1/sqrt(2) within 1e-9); coincident bases {:.2e}",
        report.trace_distance, degenerate.trace_distance
    );
    if (report.trace_distance - target).abs() < 1e-9 && degenerate.trace_distance < 1e-10 {
        CheckOutcome::pass(LABEL, detail)
    } else {
        CheckOutcome::fail(LABEL, detail)
    }
}

/// Check 5: the flip machine is physical exactly on the real great circle —
/// zero there, bounded away from zero generically even with free phases.
pub fn flip_boundary() -> CheckOutcome {
    const LABEL: &str = "flip boundary (great circle)";
    let mut config = ScenarioConfig::default_for(ScenarioKind::NotGate);
    config.flip = FlipParams {
        theta: 0.0,
        mu: PI,
        nu: PI,
        ..FlipParams::default()
    };
    let on_circle = match run_scenario(&config) {
        Ok(r) => r.trace_distance,
        Err(e) => return CheckOutcome::fail(LABEL, e.to_string()),
    };

    // Generic point: minimize over the free phases on a 16x16 grid.
    let mut generic_min = f64::INFINITY;
    for i in 0..16 {
        for j in 0..16 {
            let mut probe = ScenarioConfig::default_for(ScenarioKind::NotGate);
            probe.flip = FlipParams {
                mu: 2.0 * PI * i as f64 / 16.0,
                nu: 2.0 * PI * j as f64 / 16.0,
                ..FlipParams::default()
            };
            match run_scenario(&probe) {
                Ok(r) => generic_min = generic_min.min(r.trace_distance),
                Err(e) => return CheckOutcome::fail(LABEL, e.to_string()),
            }
        }
    }

    // Sweep the polar angle with minimized phases: zeros only at the poles.
    let spec = SweepSpec {
        base: ScenarioConfig::default_for(ScenarioKind::NotGate),
        axes: vec![Axis {
            name: "theta".to_string(),
            min: 0.0,
            max: PI,
            steps: 9,
        }],
        minimize: vec!["mu".to_string(), "nu".to_string()],
        minimize_points: 16,
    };
    let result = match run_sweep(&spec) {
        Ok(r) => r,
        Err(e) => return CheckOutcome::fail(LABEL, e.to_string()),
    };
    let zero_rows = result.zero_rows(1e-9);
    let zeros_on_poles = zero_rows.iter().all(|&i| i == 0 || i == 8);

    let detail = format!(
        "real-circle distance {on_circle:.2e}; generic minimum over 16x16 phases {generic_min:.4}; \
         sweep zeros at rows {zero_rows:?} of 0..=8"
    );
    if on_circle < 1e-10 && generic_min > 0.01 && zeros_on_poles {
        CheckOutcome::pass(LABEL, detail)
    } else {
        CheckOutcome::fail(LABEL, detail)
    }
}

/// Check 6: every experiment signals under its generic demonstration config
/// and falls silent under its degenerate (physical) config.
pub fn generic_configs_signal() -> CheckOutcome {
    const LABEL: &str = "generic configs signal, degenerate configs do not";
    let mut detail = String::new();
    let mut ok = true;
    for kind in ScenarioKind::ALL {
        let generic = match run_scenario(&ScenarioConfig::default_for(kind)) {
            Ok(r) => r,
            Err(e) => return CheckOutcome::fail(LABEL, e.to_string()),
        };
        let mut degenerate_config = ScenarioConfig::default_for(kind);
        if kind == ScenarioKind::NotGate {
            degenerate_config.flip = FlipParams {
                theta: 0.0,
                mu: PI,
                nu: PI,
                ..FlipParams::default()
            };
        } else {
            degenerate_config.basis2 = degenerate_config.basis1;
            degenerate_config.rotation_phases = (0.0, 0.0);
        }
        let degenerate = match run_scenario(&degenerate_config) {
            Ok(r) => r,
            Err(e) => return CheckOutcome::fail(LABEL, e.to_string()),
        };
        let kind_ok = generic.verdict == Verdict::Signalling
            && generic.trace_distance > 1e-3
            && degenerate.verdict == Verdict::NoSignalling
            && degenerate.trace_distance < 1e-10;
        ok &= kind_ok;
        let _ = write!(
            detail,
            "{}{}: {:.3}/{:.1e}",
            if detail.is_empty() { "" } else { "; " },
            kind.key(),
            generic.trace_distance,
            degenerate.trace_distance
        );
    }
    if ok {
        CheckOutcome::pass(LABEL, detail)
    } else {
        CheckOutcome::fail(LABEL, detail)
    }
}

/// Check 7: the independent closed-form expressions match the simulated
/// reduced states entrywise on randomized configurations.
pub fn closed_forms_agree(seed: u64) -> CheckOutcome {
    const LABEL: &str = "closed forms agree with simulation";
    let mut rng = Rng::new(seed ^ 0x1007);
    let mut worst = 0.0f64;
    let mut worst_kind = "";
    for kind in ScenarioKind::ALL {
        if !kind.has_closed_form() {
            continue;
        }
        for _ in 0..100 {
            let mut config = ScenarioConfig::default_for(kind);
            config.basis1 = random_qubit_basis(&mut rng).angles();
            config.basis2 = random_qubit_basis(&mut rng).angles();
            if kind == ScenarioKind::Hadamard {
                config.rotation_phases = (rng.uniform(0.0, 2.0 * PI), rng.uniform(0.0, 2.0 * PI));
            }
            if kind == ScenarioKind::NotGate {
                config.flip = FlipParams {
                    a: rng.uniform(0.05, 1.0),
                    c: rng.uniform(0.05, 1.0),
                    theta: rng.uniform(0.0, 2.0 * PI),
                    mu: rng.uniform(0.0, 2.0 * PI),
                    nu: rng.uniform(0.0, 2.0 * PI),
                };
            }
            let report = match run_scenario(&config) {
                Ok(r) => r,
                Err(e) => return CheckOutcome::fail(LABEL, e.to_string()),
            };
            match report.closed_form_residual {
                Some(residual) => {
                    if residual > worst {
                        worst = residual;
                        worst_kind = kind.key();
                    }
                }
                None => {
                    return CheckOutcome::fail(
                        LABEL,
                        format!("{} produced no closed-form residual", kind.key()),
                    )
                }
            }
        }
    }
    let detail = format!("100 random configs per kind: worst residual {worst:.2e} ({worst_kind})");
    if worst < 1e-10 {
        CheckOutcome::pass(LABEL, detail)
    } else {
        CheckOutcome::fail(LABEL, detail)
    }
}

/// Check 8: the trace distance behaves like a metric and the eigensolver
/// matches independent characteristic-polynomial roots.
pub fn metric_and_eigensolver(seed: u64) -> CheckOutcome {
    const LABEL: &str = "metric axioms and eigensolver";
    let mut rng = Rng::new(seed ^ 0x1008);
    let mut worst_metric = 0.0f64;
    for _ in 0..200 {
        let n = 2 + (rng.next_u64() % 3) as usize;
        let x = random_density(&mut rng, &[n]);
        let y = random_density(&mut rng, &[n]);
        let z = random_density(&mut rng, &[n]);
        let (dxy, dyx, dxx, dxz, dyz) = match (
            x.trace_distance(&y),
            y.trace_distance(&x),
            x.trace_distance(&x),
            x.trace_distance(&z),
            y.trace_distance(&z),
        ) {
            (Ok(a), Ok(b), Ok(c), Ok(d), Ok(e)) => (a, b, c, d, e),
            _ => return CheckOutcome::fail(LABEL, "trace distance failed".into()),
        };
        worst_metric = worst_metric
            .max(dxx)
            .max((dxy - dyx).abs())
            .max((-dxy).max(dxy - 1.0))
            .max(dxz - (dxy + dyz));
    }

    let mut worst_eig = 0.0f64;
    for _ in 0..200 {
        let m2 = random_hermitian(&mut rng, 2);
        let m3 = random_hermitian(&mut rng, 3);
        let (jac2, ora2, jac3, ora3) = match (
            hermitian_eigenvalues(&m2),
            hermitian_eigenvalues_2x2(&m2),
            hermitian_eigenvalues(&m3),
            hermitian_eigenvalues_3x3(&m3),
        ) {
            (Ok(a), Ok(b), Ok(c), Ok(d)) => (a, b, c, d),
            _ => return CheckOutcome::fail(LABEL, "eigendecomposition failed".into()),
        };
        for (j, o) in jac2.iter().zip(ora2.iter()) {
            worst_eig = worst_eig.max((j - o).abs());
        }
        for (j, o) in jac3.iter().zip(ora3.iter()) {
            worst_eig = worst_eig.max((j - o).abs());
        }
    }

    let detail = format!(
        "200 density triples: worst metric violation {worst_metric:.2e}; \
         200 2x2 and 3x3 matrices: worst eigenvalue deviation {worst_eig:.2e}"
    );
    if worst_metric < 1e-9 && worst_eig < 1e-9 {
        CheckOutcome::pass(LABEL, detail)
    } else {
        CheckOutcome::fail(LABEL, detail)
    }
}

/// Check 9: the machine-readable output contract — canonical schema, exact
/// parse/serialize round-trip, byte determinism, and CSV cardinality.
pub fn output_contract() -> CheckOutcome {
    const LABEL: &str = "machine-readable output contract";
    let batch = |_: ()| -> Result<String, String> {
        let mut docs = Vec::new();
        for kind in ScenarioKind::ALL {
            let config = resolve(kind, None, &Overrides::default()).map_err(|e| e.to_string())?;
            let report = run_scenario(&config).map_err(|e| e.to_string())?;
            docs.push(ReportDoc::assemble(&config, &report));
        }
        Ok(render_json_array(&docs))
    };
    let first = match batch(()) {
        Ok(t) => t,
        Err(e) => return CheckOutcome::fail(LABEL, e),
    };
    let second = match batch(()) {
        Ok(t) => t,
        Err(e) => return CheckOutcome::fail(LABEL, e),
    };
    if first != second {
        return CheckOutcome::fail(LABEL, "two identical batch runs differ bytewise".into());
    }

    // Schema: the document parses, covers all kinds in order, and each object
    // lays its keys out in the canonical order.
    let docs = match parse_report_array(&first) {
        Ok(d) => d,
        Err(e) => return CheckOutcome::fail(LABEL, format!("batch output does not parse: {e}")),
    };
    if docs.len() != ScenarioKind::ALL.len() {
        return CheckOutcome::fail(LABEL, format!("expected 8 reports, got {}", docs.len()));
    }
    for (doc, kind) in docs.iter().zip(ScenarioKind::ALL) {
        if doc.scenario != kind.key() {
            return CheckOutcome::fail(
                LABEL,
                format!(
                    "report order: expected {}, got {}",
                    kind.key(),
                    doc.scenario
                ),
            );
        }
    }
    let keys = [
        "\"scenario\":",
        "\"mode\":",
        "\"config\":",
        "\"trace_distance\":",
        "\"verdict\":",
        "\"closed_form_residual\":",
        "\"rho_left\":",
        "\"rho_right\":",
        "\"tolerances\":",
    ];
    let mut cursor = 0usize;
    for key in keys {
        match first[cursor..].find(key) {
            Some(offset) => cursor += offset + key.len(),
            None => {
                return CheckOutcome::fail(LABEL, format!("canonical key order broken at {key}"))
            }
        }
    }

    // Round-trip: parse + re-serialize is the identity on the bytes.
    if render_json_array(&docs) != first {
        return CheckOutcome::fail(LABEL, "parse + re-serialize changed the bytes".into());
    }

    // CSV cardinality: a 3x4 grid is a header plus 12 rows.
    let spec = SweepSpec {
        base: cli_default(ScenarioKind::ZGate),
        axes: vec![
            Axis {
                name: "basis2_theta".to_string(),
                min: 0.0,
                max: PI,
                steps: 3,
            },
            Axis {
                name: "basis2_phi".to_string(),
                min: 0.0,
                max: 3.0,
                steps: 4,
            },
        ],
        minimize: Vec::new(),
        minimize_points: 16,
    };
    let result = match run_sweep(&spec) {
        Ok(r) => r,
        Err(e) => return CheckOutcome::fail(LABEL, e.to_string()),
    };
    let csv = render_csv(&result);
    let lines: Vec<&str> = csv.lines().collect();
    if lines.len() != 13 || lines[0] != "basis2_theta,basis2_phi,distance,verdict" {
        return CheckOutcome::fail(
            LABEL,
            format!(
                "CSV shape wrong: {} lines, header {:?}",
                lines.len(),
                lines.first()
            ),
        );
    }

    CheckOutcome::pass(
        LABEL,
        format!(
            "batch of {} reports byte-stable ({} bytes), round-trip exact, CSV 12 rows + header",
            docs.len(),
            first.len()
        ),
    )
}
