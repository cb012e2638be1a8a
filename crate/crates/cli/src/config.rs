//! Run configuration: JSON config files, command-line overrides, and the
//! resolution of both into a fully materialized [`ScenarioConfig`].

use std::collections::BTreeMap;

use serde::Deserialize;

use nosig_core::linalg::{c64, CVector};
use nosig_core::machine::default_f_map;
use nosig_core::quantum::{BlochAngles, Ket, QubitBasis};
use nosig_core::scenario::{ScenarioConfig, ScenarioKind};
use nosig_core::Result;

/// A pair of Bloch angles in radians.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnglesFile {
    pub theta: f64,
    pub phi: f64,
}

/// Flip-experiment parameters; absent fields keep their defaults.
#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FlipFile {
    pub a: Option<f64>,
    pub c: Option<f64>,
    pub theta: Option<f64>,
    pub mu: Option<f64>,
    pub nu: Option<f64>,
}

/// One complex amplitude, matching the report output format.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    pub re: f64,
    pub im: f64,
}

/// The JSON config file schema. Every field is optional; the file is applied
/// on top of the command's defaults, and the report's `config` object is
/// itself a valid config file, so runs can be reproduced from their output.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConfigFile {
    pub basis1: Option<AnglesFile>,
    pub basis2: Option<AnglesFile>,
    pub rotation_phases: Option<(f64, f64)>,
    pub flip: Option<FlipFile>,
    pub f_map: Option<BTreeMap<String, Vec<ComplexFile>>>,
    pub threshold: Option<f64>,
    pub machine_enabled: Option<bool>,
}

impl ConfigFile {
    pub fn apply(&self, config: &mut ScenarioConfig) -> Result<()> {
        if let Some(b) = self.basis1 {
            config.basis1 = BlochAngles::new(b.theta, b.phi)?;
        }
        if let Some(b) = self.basis2 {
            config.basis2 = BlochAngles::new(b.theta, b.phi)?;
        }
        if let Some(p) = self.rotation_phases {
            config.rotation_phases = p;
        }
        if let Some(f) = self.flip {
            if let Some(v) = f.a {
                config.flip.a = v;
            }
            if let Some(v) = f.c {
                config.flip.c = v;
            }
            if let Some(v) = f.theta {
                config.flip.theta = v;
            }
            if let Some(v) = f.mu {
                config.flip.mu = v;
            }
            if let Some(v) = f.nu {
                config.flip.nu = v;
            }
        }
        if let Some(map) = &self.f_map {
            let mut out = BTreeMap::new();
            for (name, amps) in map {
                let entries: Vec<_> = amps.iter().map(|z| c64(z.re, z.im)).collect();
                let dim = entries.len();
                out.insert(name.clone(), Ket::new(vec![dim], CVector::new(entries))?);
            }
            config.f_map = Some(out);
        }
        if let Some(t) = self.threshold {
            config.threshold = t;
        }
        if let Some(m) = self.machine_enabled {
            config.machine_enabled = m;
        }
        Ok(())
    }
}

/// Command-line parameter overrides; all angles and phases in radians.
/// These take precedence over both the defaults and the config file.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct Overrides {
    /// First-basis colatitude.
    #[arg(long)]
    pub basis1_theta: Option<f64>,
    /// First-basis azimuth.
    #[arg(long)]
    pub basis1_phi: Option<f64>,
    /// Second-basis colatitude.
    #[arg(long)]
    pub basis2_theta: Option<f64>,
    /// Second-basis azimuth.
    #[arg(long)]
    pub basis2_phi: Option<f64>,
    /// Rotation phase attached to the first basis (hadamard only).
    #[arg(long)]
    pub phi1: Option<f64>,
    /// Rotation phase attached to the second basis (hadamard only).
    #[arg(long)]
    pub phi2: Option<f64>,
    /// Real weight of |0> in the first flip input (not_gate only).
    #[arg(long)]
    pub a: Option<f64>,
    /// Real weight of |0> in the second flip input (not_gate only).
    #[arg(long)]
    pub c: Option<f64>,
    /// Relative phase between the two flip inputs (not_gate only).
    #[arg(long)]
    pub theta: Option<f64>,
    /// Free rewrite phase on the first flip rule (not_gate only).
    #[arg(long)]
    pub mu: Option<f64>,
    /// Free rewrite phase on the second flip rule (not_gate only).
    #[arg(long)]
    pub nu: Option<f64>,
    /// Signalling verdict threshold on the trace distance.
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Replace the machine with the identity (physical baseline).
    #[arg(long)]
    pub disable_machine: bool,
}

impl Overrides {
    pub fn apply(&self, config: &mut ScenarioConfig) -> Result<()> {
        if let Some(v) = self.basis1_theta {
            config.basis1 = BlochAngles::new(v, config.basis1.phi())?;
        }
        if let Some(v) = self.basis1_phi {
            config.basis1 = BlochAngles::new(config.basis1.theta(), v)?;
        }
        if let Some(v) = self.basis2_theta {
            config.basis2 = BlochAngles::new(v, config.basis2.phi())?;
        }
        if let Some(v) = self.basis2_phi {
            config.basis2 = BlochAngles::new(config.basis2.theta(), v)?;
        }
        if let Some(v) = self.phi1 {
            config.rotation_phases.0 = v;
        }
        if let Some(v) = self.phi2 {
            config.rotation_phases.1 = v;
        }
        if let Some(v) = self.a {
            config.flip.a = v;
        }
        if let Some(v) = self.c {
            config.flip.c = v;
        }
        if let Some(v) = self.theta {
            config.flip.theta = v;
        }
        if let Some(v) = self.mu {
            config.flip.mu = v;
        }
        if let Some(v) = self.nu {
            config.flip.nu = v;
        }
        if let Some(v) = self.threshold {
            config.threshold = v;
        }
        if self.disable_machine {
            config.machine_enabled = false;
        }
        Ok(())
    }
}

/// The command's baseline config: both bases computational, all phases zero,
/// machine enabled, and the flip machine pinned to its real great circle.
/// With no overrides every machine degenerates to a physical operation, so a
/// bare run demonstrates the no-signal control case; the generic
/// demonstration points are a flag or two away.
pub fn cli_default(kind: ScenarioKind) -> ScenarioConfig {
    let mut config = ScenarioConfig::default_for(kind);
    config.basis2 = config.basis1;
    if kind == ScenarioKind::NotGate {
        config.flip.theta = 0.0;
        config.flip.mu = std::f64::consts::PI;
        config.flip.nu = std::f64::consts::PI;
    }
    config
}

/// Defaults, then config file, then command-line overrides; the ancilla tag
/// map is materialized for the tagged-ancilla experiment so the echoed config
/// states exactly what ran.
pub fn resolve(
    kind: ScenarioKind,
    file: Option<&ConfigFile>,
    overrides: &Overrides,
) -> Result<ScenarioConfig> {
    let mut config = cli_default(kind);
    if let Some(file) = file {
        file.apply(&mut config)?;
    }
    overrides.apply(&mut config)?;
    if kind == ScenarioKind::GeneralOp && config.f_map.is_none() {
        let b1 = QubitBasis::from_bloch(config.basis1);
        let b2 = QubitBasis::from_bloch(config.basis2);
        config.f_map = Some(default_f_map(&b1, &b2)?);
    }
    config.validate()?;
    Ok(config)
}
