//! Sweep results as CSV: one column per swept parameter, then the (possibly
//! minimized) trace distance and the verdict. Floats use the same canonical
//! rendering as the JSON reports, newlines are `\n`, and rows appear in
//! row-major axis order, so a sweep's CSV is byte-deterministic.

use nosig_core::sweep::SweepResult;

use crate::report::{format_float, verdict_name};

pub fn render_csv(result: &SweepResult) -> String {
    let mut out = String::new();
    for name in &result.axis_names {
        out.push_str(name);
        out.push(',');
    }
    out.push_str("distance,verdict\n");
    for row in &result.rows {
        for value in &row.values {
            out.push_str(&format_float(*value));
            out.push(',');
        }
        out.push_str(&format_float(row.trace_distance));
        out.push(',');
        out.push_str(&verdict_name(row.verdict));
        out.push('\n');
    }
    out
}
