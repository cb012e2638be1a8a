//! End-to-end tests of the `nosig` binary: golden output checks, the
//! config-echo feedback loop, sweep files, and the exit-code contract.

use std::fs;
use std::process::{Command, Output};

fn nosig(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nosig"))
        .args(args)
        .output()
        .expect("the nosig binary should run")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout should be UTF-8")
}

#[test]
fn batch_json_is_deterministic_and_canonical() {
    let first = nosig(&["run", "all", "--format", "json"]);
    let second = nosig(&["run", "all", "--format", "json"]);
    assert!(first.status.success());
    assert_eq!(
        first.stdout, second.stdout,
        "two identical batch runs must emit identical bytes"
    );

    let text = stdout_of(&first);
    let value: serde_json::Value = serde_json::from_str(&text).expect("valid JSON");
    let reports = value.as_array().expect("a JSON array");
    assert_eq!(reports.len(), 8);
    let expected_order = [
        "cloning",
        "general_op",
        "deletion",
        "not_gate",
        "y_gate",
        "z_gate",
        "hadamard",
        "cnot",
    ];
    for (report, name) in reports.iter().zip(expected_order) {
        assert_eq!(report["scenario"].as_str(), Some(name));
        assert_eq!(
            report["verdict"].as_str(),
            Some("NO_SIGNALLING"),
            "bare defaults are the physical control for every kind ({name})"
        );
    }

    // Every report lays its keys out in the same canonical order.
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
    for _ in 0..reports.len() {
        for key in keys {
            let offset = text[cursor..]
                .find(key)
                .unwrap_or_else(|| panic!("canonical key order broken at {key}"));
            cursor += offset + key.len();
        }
    }
}

#[test]
fn phase_flip_value_matches_the_documented_example() {
    let output = nosig(&[
        "run",
        "z_gate",
        "--basis2-theta",
        "1.5707963",
        "--format",
        "json",
    ]);
    assert!(output.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&output)).expect("valid JSON");
    let distance = value["trace_distance"].as_f64().expect("a number");
    assert!(
        (distance - 0.7071067811865476).abs() < 1e-6,
        "got {distance}"
    );
    assert_eq!(value["verdict"].as_str(), Some("SIGNALLING"));
}

#[test]
fn bare_run_defaults_are_physical() {
    let output = nosig(&["run", "cnot"]);
    assert!(output.status.success());
    let text = stdout_of(&output);
    assert!(
        text.contains("NO_SIGNALLING"),
        "bare defaults pin both bases to the same axis, so nothing signals: {text}"
    );
}

#[test]
fn report_config_echo_reproduces_the_run() {
    let original = nosig(&[
        "run",
        "z_gate",
        "--basis2-theta",
        "1.2",
        "--basis2-phi",
        "0.7",
        "--format",
        "json",
    ]);
    assert!(original.status.success());
    let text = stdout_of(&original);
    let value: serde_json::Value = serde_json::from_str(&text).expect("valid JSON");

    let dir = tempfile::tempdir().expect("temp dir");
    let path = dir.path().join("echo.json");
    fs::write(&path, value["config"].to_string()).expect("config file written");

    let replay = nosig(&[
        "run",
        "z_gate",
        "--config",
        path.to_str().expect("utf-8 path"),
        "--format",
        "json",
    ]);
    assert!(replay.status.success());
    assert_eq!(
        original.stdout, replay.stdout,
        "feeding the echoed config back must reproduce the report bytes"
    );
}

#[test]
fn sweep_writes_the_expected_grid() {
    let dir = tempfile::tempdir().expect("temp dir");
    let path = dir.path().join("flip.csv");
    let output = nosig(&[
        "sweep",
        "not_gate",
        "--axes",
        "theta=0:3.141592653589793:9",
        "--minimize",
        "mu,nu",
        "--minimize-points",
        "4",
        "--out",
        path.to_str().expect("utf-8 path"),
    ]);
    assert!(output.status.success());
    let csv = fs::read_to_string(&path).expect("sweep file written");
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 10, "header plus one row per grid point");
    assert_eq!(lines[0], "theta,distance,verdict");
    assert!(
        lines[1].ends_with("NO_SIGNALLING"),
        "at theta=0 the machine can hide: {}",
        lines[1]
    );
    assert!(
        lines[9].ends_with("NO_SIGNALLING"),
        "at theta=pi the machine can hide: {}",
        lines[9]
    );
    assert!(
        lines[5].ends_with(",SIGNALLING"),
        "between the poles it cannot: {}",
        lines[5]
    );
}

#[test]
fn selftest_command_passes() {
    let output = nosig(&["selftest"]);
    assert!(output.status.success());
    let text = stdout_of(&output);
    assert_eq!(
        text.lines().filter(|l| l.starts_with("PASS")).count(),
        9,
        "nine checks should pass: {text}"
    );
    assert!(!text.contains("FAIL"), "{text}");
}

#[test]
fn exit_codes_separate_failure_classes() {
    // An angle outside its documented range is a configuration error.
    let bad_angle = nosig(&["run", "z_gate", "--basis2-theta", "7.0"]);
    assert_eq!(bad_angle.status.code(), Some(3));

    // An unknown experiment name is a configuration error.
    let bad_kind = nosig(&["run", "nonsense"]);
    assert_eq!(bad_kind.status.code(), Some(3));

    // A single-point axis is a configuration error caught by validation.
    let bad_axis = nosig(&["sweep", "z_gate", "--axes", "basis2_theta=0:1:1"]);
    assert_eq!(bad_axis.status.code(), Some(3));

    // A malformed axis expression is a usage error.
    let bad_grammar = nosig(&["sweep", "z_gate", "--axes", "basis2_theta=0:1"]);
    assert_eq!(bad_grammar.status.code(), Some(2));

    // An unknown flag is a usage error.
    let bad_flag = nosig(&["run", "z_gate", "--frobnicate"]);
    assert_eq!(bad_flag.status.code(), Some(2));

    // A tag map that covers only some of the states the machine will meet
    // fails at rewrite time, not at configuration time.
    let dir = tempfile::tempdir().expect("temp dir");
    let path = dir.path().join("partial.json");
    fs::write(
        &path,
        r#"{"f_map":{"psi1":[{"re":1.0,"im":0.0},{"re":0.0,"im":0.0}]}}"#,
    )
    .expect("config file written");
    let partial_map = nosig(&[
        "run",
        "general_op",
        "--config",
        path.to_str().expect("utf-8 path"),
    ]);
    assert_eq!(partial_map.status.code(), Some(4));
    let stderr = String::from_utf8(partial_map.stderr).expect("stderr should be UTF-8");
    assert!(
        stderr.contains("no rewrite rule"),
        "the failure should name the unmatched state: {stderr}"
    );
}
