//! Grid-sweep checks: bitwise determinism, refinement monotonicity of the
//! per-cell minimizer, and soundness of the reported zero set.

use nosig_core::scenario::{run_scenario, ScenarioConfig, ScenarioKind, Verdict};
use nosig_core::sweep::{run_sweep, Axis, SweepSpec};

const PI: f64 = std::f64::consts::PI;

fn axis(name: &str, min: f64, max: f64, steps: usize) -> Axis {
    Axis {
        name: name.to_string(),
        min,
        max,
        steps,
    }
}

fn flip_base() -> ScenarioConfig {
    let mut base = ScenarioConfig::default_for(ScenarioKind::NotGate);
    base.flip.a = 0.6;
    base.flip.c = 0.8;
    base
}

#[test]
fn sweeps_are_bitwise_reproducible() {
    let spec = SweepSpec {
        base: flip_base(),
        axes: vec![axis("theta", 0.0, PI, 5)],
        minimize: vec!["mu".to_string(), "nu".to_string()],
        minimize_points: 6,
    };
    let first = run_sweep(&spec).unwrap();
    let second = run_sweep(&spec).unwrap();
    assert_eq!(first.rows.len(), second.rows.len());
    for (a, b) in first.rows.iter().zip(&second.rows) {
        assert_eq!(a.trace_distance.to_bits(), b.trace_distance.to_bits());
        assert_eq!(a.verdict, b.verdict);
        let (av, bv) = (a.values.iter(), b.values.iter());
        assert!(av.zip(bv).all(|(x, y)| x.to_bits() == y.to_bits()));
        let am = a.minimizer.as_ref().unwrap();
        let bm = b.minimizer.as_ref().unwrap();
        assert!(am.iter().zip(bm).all(|(x, y)| x.to_bits() == y.to_bits()));
    }
}

#[test]
fn doubling_the_minimization_grid_never_loses_ground() {
    // Point k sits at lo + k*(hi-lo)/points, so doubling `points` keeps every
    // previously probed value; the per-cell minimum must be non-increasing.
    let mut results = Vec::new();
    for points in [4, 8, 16] {
        let spec = SweepSpec {
            base: flip_base(),
            axes: vec![axis("theta", 0.0, PI, 7)],
            minimize: vec!["mu".to_string(), "nu".to_string()],
            minimize_points: points,
        };
        results.push(run_sweep(&spec).unwrap());
    }
    for window in results.windows(2) {
        for (coarse, fine) in window[0].rows.iter().zip(&window[1].rows) {
            assert!(
                fine.trace_distance <= coarse.trace_distance,
                "refinement walked uphill: {} -> {}",
                coarse.trace_distance,
                fine.trace_distance
            );
        }
    }
}

#[test]
fn flip_zero_set_sits_exactly_on_the_poles() {
    // Minimizing the two free rewrite phases at each polar angle: the signal
    // can only be hidden at the poles, where the machine is a real unitary.
    let spec = SweepSpec {
        base: flip_base(),
        axes: vec![axis("theta", 0.0, PI, 9)],
        minimize: vec!["mu".to_string(), "nu".to_string()],
        minimize_points: 8,
    };
    let result = run_sweep(&spec).unwrap();
    assert_eq!(result.rows.len(), 9);
    assert_eq!(result.zero_rows(1e-9), vec![0, 8]);

    // Each reported zero must replay: plugging the minimizer back into a
    // standalone run reproduces a distance below the tolerance.
    for &row_index in &result.zero_rows(1e-9) {
        let row = &result.rows[row_index];
        let mut config = flip_base();
        config.flip.theta = row.values[0];
        let minimizer = row.minimizer.as_ref().unwrap();
        config.flip.mu = minimizer[0];
        config.flip.nu = minimizer[1];
        let report = run_scenario(&config).unwrap();
        assert!(
            report.trace_distance <= 1e-9,
            "row {row_index} does not replay: {}",
            report.trace_distance
        );
        assert_eq!(report.verdict, Verdict::NoSignalling);
    }

    // Away from the poles the minimized signal stays macroscopic.
    for (i, row) in result.rows.iter().enumerate() {
        if i != 0 && i != 8 {
            assert!(
                row.trace_distance > 1e-3,
                "row {i} unexpectedly small: {}",
                row.trace_distance
            );
        }
    }
}

#[test]
fn cloning_zero_set_is_the_label_degeneracy() {
    // Sweeping the second basis colatitude against a fixed computational
    // first basis: the mixtures agree exactly when the bases coincide
    // (theta = 0) or merely swap labels (theta = pi).
    let spec = SweepSpec {
        base: ScenarioConfig::default_for(ScenarioKind::Cloning),
        axes: vec![axis("basis2_theta", 0.0, PI, 5)],
        minimize: Vec::new(),
        minimize_points: 1,
    };
    let result = run_sweep(&spec).unwrap();
    assert_eq!(result.zero_rows(1e-9), vec![0, 4]);
    assert!(result.rows.iter().all(|r| r.minimizer.is_none()));
}

#[test]
fn multi_axis_sweeps_cover_the_full_grid() {
    let spec = SweepSpec {
        base: flip_base(),
        axes: vec![axis("a", 0.1, 0.9, 3), axis("theta", 0.5, 2.5, 4)],
        minimize: Vec::new(),
        minimize_points: 1,
    };
    let result = run_sweep(&spec).unwrap();
    assert_eq!(result.rows.len(), 12);
    assert_eq!(result.axis_names, vec!["a", "theta"]);
    for row in &result.rows {
        assert!(row.trace_distance.is_finite());
        assert!((0.0..=1.0).contains(&row.trace_distance));
    }
    assert!(result.min_distance() > 0.0);
}
