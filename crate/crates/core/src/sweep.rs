//! Parameter sweeps over experiment configurations.
//!
//! A sweep walks an inclusive rectangular grid over named scenario parameters
//! and records the trace distance at every cell. Optionally, a set of
//! *minimized* parameters is re-optimized at each cell over a fixed coarse
//! grid; this answers questions like "is there any choice of free machine
//! phases that hides the signal here?". Everything is pure `f64` arithmetic,
//! so results are bit-for-bit reproducible.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::quantum::BlochAngles;
use crate::scenario::{run_scenario, ScenarioConfig, ScenarioKind, Verdict};

const PI: f64 = core::f64::consts::PI;

/// Hard cap on grid cells so a typo cannot request an unbounded run.
const MAX_CELLS: usize = 1_000_000;

/// One swept parameter: an inclusive uniform grid with `steps` points.
/// Validated sweeps require at least two points per axis; `value` itself
/// stays total and pins the parameter at `min` when `steps <= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    pub fn value(&self, index: usize) -> f64 {
        if self.steps <= 1 || self.min == self.max {
            self.min
        } else if index + 1 == self.steps {
            // Land on the endpoint exactly rather than trusting rounding.
            self.max
        } else {
            self.min + (self.max - self.min) * index as f64 / (self.steps - 1) as f64
        }
    }
}

/// Valid domain of a sweepable parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisDomain {
    pub lo: f64,
    pub hi: f64,
    /// Whether `hi` itself is outside the domain (angle-like parameters).
    pub hi_exclusive: bool,
}

/// Names of the parameters a given experiment kind can sweep.
pub fn sweepable_axes(kind: ScenarioKind) -> &'static [&'static str] {
    match kind {
        ScenarioKind::NotGate => &["a", "c", "theta", "mu", "nu"],
        ScenarioKind::Hadamard => &[
            "basis1_theta",
            "basis1_phi",
            "basis2_theta",
            "basis2_phi",
            "phi1",
            "phi2",
        ],
        _ => &["basis1_theta", "basis1_phi", "basis2_theta", "basis2_phi"],
    }
}

/// Domain of one sweepable parameter of a kind.
pub fn axis_domain(kind: ScenarioKind, name: &str) -> Result<AxisDomain> {
    if !sweepable_axes(kind).contains(&name) {
        return Err(Error::BadConfig {
            reason: format!("{} cannot sweep parameter {name}", kind.key()),
        });
    }
    Ok(match name {
        "a" | "c" => AxisDomain {
            lo: 0.0,
            hi: 1.0,
            hi_exclusive: false,
        },
        "basis1_theta" | "basis2_theta" => AxisDomain {
            lo: 0.0,
            hi: PI,
            hi_exclusive: false,
        },
        // All remaining parameters are phases on [0, 2*pi).
        _ => AxisDomain {
            lo: 0.0,
            hi: 2.0 * PI,
            hi_exclusive: true,
        },
    })
}

fn apply_value(config: &mut ScenarioConfig, name: &str, value: f64) -> Result<()> {
    match name {
        "basis1_theta" => config.basis1 = BlochAngles::new(value, config.basis1.phi())?,
        "basis1_phi" => config.basis1 = BlochAngles::new(config.basis1.theta(), value)?,
        "basis2_theta" => config.basis2 = BlochAngles::new(value, config.basis2.phi())?,
        "basis2_phi" => config.basis2 = BlochAngles::new(config.basis2.theta(), value)?,
        "phi1" => config.rotation_phases.0 = value,
        "phi2" => config.rotation_phases.1 = value,
        "a" => config.flip.a = value,
        "c" => config.flip.c = value,
        "theta" => config.flip.theta = value,
        "mu" => config.flip.mu = value,
        "nu" => config.flip.nu = value,
        _ => {
            return Err(Error::BadConfig {
                reason: format!("unknown sweep parameter: {name}"),
            })
        }
    }
    Ok(())
}

/// A full sweep request.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub base: ScenarioConfig,
    pub axes: Vec<Axis>,
    /// Parameters minimized over at every grid cell.
    pub minimize: Vec<String>,
    /// Number of grid points per minimized parameter; point `k` sits at
    /// `lo + k*(hi - lo)/points`, so doubling `points` refines the grid
    /// without abandoning any already-tested value.
    pub minimize_points: usize,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if self.axes.is_empty() {
            return Err(Error::BadConfig {
                reason: "a sweep needs at least one axis".into(),
            });
        }
        let mut cells: usize = 1;
        for (i, axis) in self.axes.iter().enumerate() {
            if self.axes[..i].iter().any(|a| a.name == axis.name) {
                return Err(Error::BadConfig {
                    reason: format!("parameter {} swept twice", axis.name),
                });
            }
            if axis.steps < 2 {
                return Err(Error::BadConfig {
                    reason: format!("axis {} needs at least two grid points", axis.name),
                });
            }
            if !axis.min.is_finite() || !axis.max.is_finite() || axis.min > axis.max {
                return Err(Error::BadConfig {
                    reason: format!(
                        "axis {} has an invalid range {}..{}",
                        axis.name, axis.min, axis.max
                    ),
                });
            }
            let domain = axis_domain(self.base.kind, &axis.name)?;
            let hi_ok = if domain.hi_exclusive {
                axis.max < domain.hi
            } else {
                axis.max <= domain.hi
            };
            if axis.min < domain.lo || !hi_ok {
                return Err(Error::BadConfig {
                    reason: format!(
                        "axis {} range {}..{} leaves the parameter domain",
                        axis.name, axis.min, axis.max
                    ),
                });
            }
            cells = cells.saturating_mul(axis.steps);
        }
        if cells > MAX_CELLS {
            return Err(Error::BadConfig {
                reason: format!("sweep would visit {cells} cells (limit {MAX_CELLS})"),
            });
        }
        if self.minimize_points == 0 {
            return Err(Error::BadConfig {
                reason: "minimization needs at least one grid point".into(),
            });
        }
        for (i, name) in self.minimize.iter().enumerate() {
            if self.minimize[..i].contains(name) {
                return Err(Error::BadConfig {
                    reason: format!("parameter {name} minimized twice"),
                });
            }
            if self.axes.iter().any(|a| &a.name == name) {
                return Err(Error::BadConfig {
                    reason: format!("parameter {name} cannot be both swept and minimized"),
                });
            }
            axis_domain(self.base.kind, name)?;
        }
        Ok(())
    }
}

/// One grid cell's outcome. `values` aligns with the sweep's axis order;
/// `minimizer` (present when minimizing) aligns with the minimized names and
/// holds the arg-min found on the minimization grid.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub values: Vec<f64>,
    pub trace_distance: f64,
    pub verdict: Verdict,
    pub minimizer: Option<Vec<f64>>,
}

/// All rows of a completed sweep, in row-major axis order (first axis
/// slowest).
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub kind: ScenarioKind,
    pub axis_names: Vec<String>,
    pub minimize_names: Vec<String>,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn min_distance(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.trace_distance)
            .fold(f64::INFINITY, f64::min)
    }

    /// Indices of rows whose distance does not exceed `epsilon` — the
    /// candidate "the machine hides here" set.
    pub fn zero_rows(&self, epsilon: f64) -> Vec<usize> {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.trace_distance <= epsilon)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Runs the sweep. Rows are emitted in row-major order over the axes.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let total: usize = spec.axes.iter().map(|a| a.steps).product();
    let mut rows = Vec::with_capacity(total);
    let mut odometer = alloc::vec![0usize; spec.axes.len()];
    for _ in 0..total {
        let mut config = spec.base.clone();
        let mut values = Vec::with_capacity(spec.axes.len());
        for (axis, &idx) in spec.axes.iter().zip(&odometer) {
            let v = axis.value(idx);
            apply_value(&mut config, &axis.name, v)?;
            values.push(v);
        }
        let (trace_distance, verdict, minimizer) = if spec.minimize.is_empty() {
            let report = run_scenario(&config)?;
            (report.trace_distance, report.verdict, None)
        } else {
            minimize_cell(&config, &spec.minimize, spec.minimize_points)?
        };
        rows.push(SweepRow {
            values,
            trace_distance,
            verdict,
            minimizer,
        });
        for slot in (0..spec.axes.len()).rev() {
            odometer[slot] += 1;
            if odometer[slot] < spec.axes[slot].steps {
                break;
            }
            odometer[slot] = 0;
        }
    }
    Ok(SweepResult {
        kind: spec.base.kind,
        axis_names: spec.axes.iter().map(|a| a.name.clone()).collect(),
        minimize_names: spec.minimize.clone(),
        rows,
    })
}

fn minimize_cell(
    base: &ScenarioConfig,
    minimize: &[String],
    points: usize,
) -> Result<(f64, Verdict, Option<Vec<f64>>)> {
    let grids: Vec<Vec<f64>> = minimize
        .iter()
        .map(|name| {
            let domain = axis_domain(base.kind, name)?;
            Ok((0..points)
                .map(|k| domain.lo + (domain.hi - domain.lo) * k as f64 / points as f64)
                .collect())
        })
        .collect::<Result<_>>()?;
    let mut best: Option<(f64, Verdict, Vec<f64>)> = None;
    let mut odometer = alloc::vec![0usize; minimize.len()];
    let combos: usize = grids.iter().map(|g| g.len()).product();
    for _ in 0..combos {
        let mut config = base.clone();
        let mut point = Vec::with_capacity(minimize.len());
        for ((name, grid), &idx) in minimize.iter().zip(&grids).zip(&odometer) {
            apply_value(&mut config, name, grid[idx])?;
            point.push(grid[idx]);
        }
        let report = run_scenario(&config)?;
        let better = match &best {
            Some((d, _, _)) => report.trace_distance < *d,
            None => true,
        };
        if better {
            best = Some((report.trace_distance, report.verdict, point));
        }
        for slot in (0..minimize.len()).rev() {
            odometer[slot] += 1;
            if odometer[slot] < grids[slot].len() {
                break;
            }
            odometer[slot] = 0;
        }
    }
    let (d, v, p) = best.expect("at least one minimization point");
    Ok((d, v, Some(p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn axis(name: &str, min: f64, max: f64, steps: usize) -> Axis {
        Axis {
            name: name.to_string(),
            min,
            max,
            steps,
        }
    }

    #[test]
    fn axis_endpoints_are_exact() {
        let a = axis("basis2_theta", 0.25, 3.0, 7);
        assert_eq!(a.value(0), 0.25);
        assert_eq!(a.value(6), 3.0);
    }

    #[test]
    fn validation_rejects_out_of_domain_axes() {
        let spec = SweepSpec {
            base: ScenarioConfig::default_for(ScenarioKind::Cloning),
            axes: alloc::vec![axis("basis2_theta", 0.0, 4.0, 5)],
            minimize: Vec::new(),
            minimize_points: 16,
        };
        assert!(spec.validate().is_err());

        let spec = SweepSpec {
            base: ScenarioConfig::default_for(ScenarioKind::Cloning),
            axes: alloc::vec![axis("basis2_phi", 0.0, 2.0 * PI, 5)],
            minimize: Vec::new(),
            minimize_points: 16,
        };
        assert!(spec.validate().is_err());
    }

    #[test]
    fn validation_rejects_swept_and_minimized_parameter() {
        let spec = SweepSpec {
            base: ScenarioConfig::default_for(ScenarioKind::NotGate),
            axes: alloc::vec![axis("mu", 0.0, 3.0, 4)],
            minimize: alloc::vec!["mu".to_string()],
            minimize_points: 4,
        };
        assert!(spec.validate().is_err());
    }

    #[test]
    fn row_order_is_row_major() {
        let spec = SweepSpec {
            base: ScenarioConfig::default_for(ScenarioKind::Cloning),
            axes: alloc::vec![
                axis("basis2_theta", 1.0, 2.0, 2),
                axis("basis2_phi", 0.0, 1.0, 3),
            ],
            minimize: Vec::new(),
            minimize_points: 16,
        };
        let result = run_sweep(&spec).unwrap();
        assert_eq!(result.rows.len(), 6);
        let firsts: Vec<f64> = result.rows.iter().map(|r| r.values[0]).collect();
        assert_eq!(firsts, alloc::vec![1.0, 1.0, 1.0, 2.0, 2.0, 2.0]);
        let seconds: Vec<f64> = result.rows.iter().map(|r| r.values[1]).collect();
        assert_eq!(seconds, alloc::vec![0.0, 0.5, 1.0, 0.0, 0.5, 1.0]);
    }
}
