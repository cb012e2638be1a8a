//! Canonical report serialization.
//!
//! One run produces one JSON object with a fixed key order and fixed float
//! formatting (`{:.16e}`, 17 significant digits), so identical runs emit
//! byte-identical documents, and parsing a document and re-serializing it
//! reproduces it exactly. The parser is deliberately strict: it accepts only
//! documents with the canonical shape.

use std::fmt::Write as _;

use serde_json::Value;

use nosig_core::scenario::{ScenarioConfig, ScenarioKind, SignallingReport};
use nosig_core::{tol, CMatrix};

/// Everything one report serializes, in serialization order.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportDoc {
    pub scenario: String,
    pub mode: String,
    pub config: ConfigEcho,
    pub trace_distance: f64,
    pub verdict: String,
    pub closed_form_residual: Option<f64>,
    pub rho_left: Vec<Vec<(f64, f64)>>,
    pub rho_right: Vec<Vec<(f64, f64)>>,
    pub tolerances: Vec<(String, f64)>,
}

/// The fully materialized configuration a run used, echoed into its report.
/// This object is itself a valid config file.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigEcho {
    pub basis1: (f64, f64),
    pub basis2: (f64, f64),
    pub rotation_phases: (f64, f64),
    pub flip: (f64, f64, f64, f64, f64),
    pub f_map: Option<Vec<(String, Vec<(f64, f64)>)>>,
    pub threshold: f64,
    pub machine_enabled: bool,
}

fn matrix_rows(m: &CMatrix) -> Vec<Vec<(f64, f64)>> {
    (0..m.rows())
        .map(|r| {
            (0..m.cols())
                .map(|c| {
                    let z = m.get(r, c);
                    (z.re, z.im)
                })
                .collect()
        })
        .collect()
}

/// Names and values of the numeric guards every run operates under, in
/// serialization order.
pub fn tolerance_table() -> Vec<(String, f64)> {
    vec![
        ("hermiticity".into(), tol::HERMITICITY_TOL),
        ("eigenvalue".into(), tol::EIG_TOL),
        ("equality".into(), tol::EQUALITY_TOL),
        ("norm".into(), tol::NORM_TOL),
        ("probability".into(), tol::PROB_EPSILON),
        (
            "default_signalling_threshold".into(),
            tol::DEFAULT_SIGNALLING_THRESHOLD,
        ),
    ]
}

impl ReportDoc {
    /// Assembles the serializable document for one run. `config` must be the
    /// fully resolved configuration the run actually used.
    pub fn assemble(config: &ScenarioConfig, report: &SignallingReport) -> ReportDoc {
        let f_map = config.f_map.as_ref().map(|map| {
            map.iter()
                .map(|(name, ket)| {
                    let amps = ket
                        .amplitudes()
                        .as_slice()
                        .iter()
                        .map(|z| (z.re, z.im))
                        .collect();
                    (name.clone(), amps)
                })
                .collect()
        });
        ReportDoc {
            scenario: report.kind.key().to_string(),
            mode: report.mode.key().to_string(),
            config: ConfigEcho {
                basis1: (config.basis1.theta(), config.basis1.phi()),
                basis2: (config.basis2.theta(), config.basis2.phi()),
                rotation_phases: config.rotation_phases,
                flip: (
                    config.flip.a,
                    config.flip.c,
                    config.flip.theta,
                    config.flip.mu,
                    config.flip.nu,
                ),
                f_map,
                threshold: config.threshold,
                machine_enabled: config.machine_enabled,
            },
            trace_distance: report.trace_distance,
            verdict: verdict_name(report.verdict),
            closed_form_residual: report.closed_form_residual,
            rho_left: matrix_rows(report.rho_left.matrix()),
            rho_right: matrix_rows(report.rho_right.matrix()),
            tolerances: tolerance_table(),
        }
    }
}

pub fn verdict_name(verdict: nosig_core::Verdict) -> String {
    match verdict {
        nosig_core::Verdict::Signalling => "SIGNALLING".to_string(),
        nosig_core::Verdict::NoSignalling => "NO_SIGNALLING".to_string(),
    }
}

/// The canonical float rendering: scientific notation with 17 significant
/// digits, enough to reconstruct the exact bit pattern on parse.
pub fn format_float(x: f64) -> String {
    format!("{:.16e}", x)
}

fn push_string(out: &mut String, s: &str) {
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

fn push_complex(out: &mut String, z: (f64, f64)) {
    out.push_str("{\"re\":");
    out.push_str(&format_float(z.0));
    out.push_str(",\"im\":");
    out.push_str(&format_float(z.1));
    out.push('}');
}

fn push_matrix(out: &mut String, rows: &[Vec<(f64, f64)>]) {
    out.push('[');
    for (r, row) in rows.iter().enumerate() {
        if r > 0 {
            out.push(',');
        }
        out.push('[');
        for (c, &z) in row.iter().enumerate() {
            if c > 0 {
                out.push(',');
            }
            push_complex(out, z);
        }
        out.push(']');
    }
    out.push(']');
}

fn push_angles(out: &mut String, angles: (f64, f64)) {
    out.push_str("{\"theta\":");
    out.push_str(&format_float(angles.0));
    out.push_str(",\"phi\":");
    out.push_str(&format_float(angles.1));
    out.push('}');
}

/// Renders one report as a single-line canonical JSON object.
pub fn render_json(doc: &ReportDoc) -> String {
    let mut out = String::new();
    out.push_str("{\"scenario\":");
    push_string(&mut out, &doc.scenario);
    out.push_str(",\"mode\":");
    push_string(&mut out, &doc.mode);
    out.push_str(",\"config\":{\"basis1\":");
    push_angles(&mut out, doc.config.basis1);
    out.push_str(",\"basis2\":");
    push_angles(&mut out, doc.config.basis2);
    out.push_str(",\"rotation_phases\":[");
    out.push_str(&format_float(doc.config.rotation_phases.0));
    out.push(',');
    out.push_str(&format_float(doc.config.rotation_phases.1));
    out.push_str("],\"flip\":{\"a\":");
    out.push_str(&format_float(doc.config.flip.0));
    out.push_str(",\"c\":");
    out.push_str(&format_float(doc.config.flip.1));
    out.push_str(",\"theta\":");
    out.push_str(&format_float(doc.config.flip.2));
    out.push_str(",\"mu\":");
    out.push_str(&format_float(doc.config.flip.3));
    out.push_str(",\"nu\":");
    out.push_str(&format_float(doc.config.flip.4));
    out.push_str("},\"f_map\":");
    match &doc.config.f_map {
        None => out.push_str("null"),
        Some(entries) => {
            out.push('{');
            for (i, (name, amps)) in entries.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                push_string(&mut out, name);
                out.push_str(":[");
                for (j, &z) in amps.iter().enumerate() {
                    if j > 0 {
                        out.push(',');
                    }
                    push_complex(&mut out, z);
                }
                out.push(']');
            }
            out.push('}');
        }
    }
    out.push_str(",\"threshold\":");
    out.push_str(&format_float(doc.config.threshold));
    out.push_str(",\"machine_enabled\":");
    out.push_str(if doc.config.machine_enabled {
        "true"
    } else {
        "false"
    });
    out.push_str("},\"trace_distance\":");
    out.push_str(&format_float(doc.trace_distance));
    out.push_str(",\"verdict\":");
    push_string(&mut out, &doc.verdict);
    out.push_str(",\"closed_form_residual\":");
    match doc.closed_form_residual {
        Some(r) => out.push_str(&format_float(r)),
        None => out.push_str("null"),
    }
    out.push_str(",\"rho_left\":");
    push_matrix(&mut out, &doc.rho_left);
    out.push_str(",\"rho_right\":");
    push_matrix(&mut out, &doc.rho_right);
    out.push_str(",\"tolerances\":{");
    for (i, (name, value)) in doc.tolerances.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        push_string(&mut out, name);
        out.push(':');
        out.push_str(&format_float(*value));
    }
    out.push_str("}}");
    out
}

/// Renders a batch of reports as a canonical JSON array, one report per kind.
pub fn render_json_array(docs: &[ReportDoc]) -> String {
    let mut out = String::new();
    out.push('[');
    for (i, doc) in docs.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&render_json(doc));
    }
    out.push(']');
    out
}

fn field<'v>(value: &'v Value, key: &str) -> Result<&'v Value, String> {
    value.get(key).ok_or_else(|| format!("missing key: {key}"))
}

fn float_field(value: &Value, key: &str) -> Result<f64, String> {
    field(value, key)?
        .as_f64()
        .ok_or_else(|| format!("{key} is not a number"))
}

fn string_field(value: &Value, key: &str) -> Result<String, String> {
    Ok(field(value, key)?
        .as_str()
        .ok_or_else(|| format!("{key} is not a string"))?
        .to_string())
}

fn parse_complex(value: &Value) -> Result<(f64, f64), String> {
    let obj = value
        .as_object()
        .ok_or_else(|| "complex entry is not an object".to_string())?;
    if obj.len() != 2 {
        return Err("complex entry must have exactly re and im".into());
    }
    Ok((float_field(value, "re")?, float_field(value, "im")?))
}

fn parse_matrix(value: &Value) -> Result<Vec<Vec<(f64, f64)>>, String> {
    value
        .as_array()
        .ok_or_else(|| "matrix is not an array".to_string())?
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| "matrix row is not an array".to_string())?
                .iter()
                .map(parse_complex)
                .collect()
        })
        .collect()
}

fn parse_angles(value: &Value) -> Result<(f64, f64), String> {
    Ok((float_field(value, "theta")?, float_field(value, "phi")?))
}

fn parse_doc(value: &Value) -> Result<ReportDoc, String> {
    let config = field(value, "config")?;
    let flip = field(config, "flip")?;
    let phases = field(config, "rotation_phases")?
        .as_array()
        .ok_or_else(|| "rotation_phases is not an array".to_string())?;
    if phases.len() != 2 {
        return Err("rotation_phases must hold two phases".into());
    }
    let phase = |i: usize| -> Result<f64, String> {
        phases[i]
            .as_f64()
            .ok_or_else(|| "rotation phase is not a number".to_string())
    };
    let f_map = match field(config, "f_map")? {
        Value::Null => None,
        Value::Object(map) => {
            let mut entries = Vec::new();
            for (name, amps) in map {
                let amps = amps
                    .as_array()
                    .ok_or_else(|| "tag amplitudes are not an array".to_string())?
                    .iter()
                    .map(parse_complex)
                    .collect::<Result<Vec<_>, _>>()?;
                entries.push((name.clone(), amps));
            }
            Some(entries)
        }
        _ => return Err("f_map is neither null nor an object".into()),
    };
    let tolerances = field(value, "tolerances")?
        .as_object()
        .ok_or_else(|| "tolerances is not an object".to_string())?;
    let mut tolerance_entries = Vec::new();
    for (name, _) in tolerance_table() {
        let v = tolerances
            .get(&name)
            .and_then(Value::as_f64)
            .ok_or_else(|| format!("tolerances is missing {name}"))?;
        tolerance_entries.push((name, v));
    }
    Ok(ReportDoc {
        scenario: string_field(value, "scenario")?,
        mode: string_field(value, "mode")?,
        config: ConfigEcho {
            basis1: parse_angles(field(config, "basis1")?)?,
            basis2: parse_angles(field(config, "basis2")?)?,
            rotation_phases: (phase(0)?, phase(1)?),
            flip: (
                float_field(flip, "a")?,
                float_field(flip, "c")?,
                float_field(flip, "theta")?,
                float_field(flip, "mu")?,
                float_field(flip, "nu")?,
            ),
            f_map,
            threshold: float_field(config, "threshold")?,
            machine_enabled: field(config, "machine_enabled")?
                .as_bool()
                .ok_or_else(|| "machine_enabled is not a bool".to_string())?,
        },
        trace_distance: float_field(value, "trace_distance")?,
        verdict: string_field(value, "verdict")?,
        closed_form_residual: match field(value, "closed_form_residual")? {
            Value::Null => None,
            v => Some(
                v.as_f64()
                    .ok_or_else(|| "closed_form_residual is not a number".to_string())?,
            ),
        },
        rho_left: parse_matrix(field(value, "rho_left")?)?,
        rho_right: parse_matrix(field(value, "rho_right")?)?,
        tolerances: tolerance_entries,
    })
}

/// Parses one canonical report document.
pub fn parse_report(text: &str) -> Result<ReportDoc, String> {
    let value: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    parse_doc(&value)
}

/// Parses a canonical report array (as emitted by a batch run).
pub fn parse_report_array(text: &str) -> Result<Vec<ReportDoc>, String> {
    let value: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    value
        .as_array()
        .ok_or_else(|| "expected a JSON array of reports".to_string())?
        .iter()
        .map(parse_doc)
        .collect()
}

fn render_matrix_text(out: &mut String, label: &str, rows: &[Vec<(f64, f64)>]) {
    let _ = writeln!(out, "{label}:");
    for row in rows {
        out.push_str("  ");
        for (i, (re, im)) in row.iter().enumerate() {
            if i > 0 {
                out.push_str("  ");
            }
            let _ = write!(out, "{re:+.6}{im:+.6}i");
        }
        out.push('\n');
    }
}

/// Renders one report for human consumption.
pub fn render_text(doc: &ReportDoc) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scenario: {} ({})", doc.scenario, doc.mode);
    let _ = writeln!(
        out,
        "basis1: theta={:.6} phi={:.6}   basis2: theta={:.6} phi={:.6}",
        doc.config.basis1.0, doc.config.basis1.1, doc.config.basis2.0, doc.config.basis2.1
    );
    if doc.scenario == "not_gate" {
        let (a, c, theta, mu, nu) = doc.config.flip;
        let _ = writeln!(
            out,
            "flip: a={a:.6} c={c:.6} theta={theta:.6} mu={mu:.6} nu={nu:.6}"
        );
    }
    if doc.scenario == "hadamard" {
        let _ = writeln!(
            out,
            "rotation phases: phi1={:.6} phi2={:.6}",
            doc.config.rotation_phases.0, doc.config.rotation_phases.1
        );
    }
    if !doc.config.machine_enabled {
        let _ = writeln!(out, "machine: disabled (identity baseline)");
    }
    let _ = writeln!(out, "trace distance: {:.12}", doc.trace_distance);
    let _ = writeln!(
        out,
        "verdict: {} (threshold {:e})",
        doc.verdict, doc.config.threshold
    );
    match doc.closed_form_residual {
        Some(r) => {
            let _ = writeln!(out, "closed-form residual: {r:e}");
        }
        None => {
            let _ = writeln!(out, "closed-form residual: n/a");
        }
    }
    render_matrix_text(&mut out, "rho_left", &doc.rho_left);
    render_matrix_text(&mut out, "rho_right", &doc.rho_right);
    out
}

/// Convenience: scenario kind from a parsed document.
pub fn doc_kind(doc: &ReportDoc) -> Result<ScenarioKind, String> {
    ScenarioKind::from_key(&doc.scenario).map_err(|e| e.to_string())
}
