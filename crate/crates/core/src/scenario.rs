//! The signalling experiments themselves.
//!
//! Every scenario has the same shape: two parties share an entangled state,
//! one of them does something local, and we ask whether the other party's
//! reduced density matrix depends on a remote choice. The trace distance
//! between the two candidate reduced states is the signal strength; genuinely
//! physical operations always give zero, and each hypothetical machine in
//! [`crate::machine`] gives a strictly positive value somewhere.
//!
//! Two experiment shapes cover all machines:
//!
//! * **Remote change** — the sender applies (or does not apply) the machine to
//!   their half; we compare the *receiver's* reduced state before and after.
//! * **Basis dependence** — the sender measures in one of two bases, the
//!   receiver feeds the collapsed state through the machine; we compare the
//!   receiver's output mixtures for the two basis choices.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{c64, CMatrix, Complex};
use crate::machine::{
    self, cloner_machine, cnot_machine, default_f_map, deleter_machine, flip_machine,
    general_op_machine, hadamard_machine, identity_machine, names, pair_name, y_gate_machine,
    z_gate_machine, HypotheticalMachine, StateRegistry, Term, TermDecomposition,
};
use crate::quantum::{ket_from_bloch, BlochAngles, DensityMatrix, Ensemble, Ket, QubitBasis};
use crate::tol::DEFAULT_SIGNALLING_THRESHOLD;

const PI: f64 = core::f64::consts::PI;

/// The eight experiments this crate can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    Cloning,
    GeneralOp,
    Deletion,
    NotGate,
    YGate,
    ZGate,
    Hadamard,
    Cnot,
}

/// How a scenario extracts a would-be signal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    RemoteChange,
    BasisDependence,
}

impl Mode {
    pub fn key(self) -> &'static str {
        match self {
            Mode::RemoteChange => "remote_change",
            Mode::BasisDependence => "basis_dependence",
        }
    }
}

impl ScenarioKind {
    /// All kinds, in the order batch runs use.
    pub const ALL: [ScenarioKind; 8] = [
        ScenarioKind::Cloning,
        ScenarioKind::GeneralOp,
        ScenarioKind::Deletion,
        ScenarioKind::NotGate,
        ScenarioKind::YGate,
        ScenarioKind::ZGate,
        ScenarioKind::Hadamard,
        ScenarioKind::Cnot,
    ];

    pub fn key(self) -> &'static str {
        match self {
            ScenarioKind::Cloning => "cloning",
            ScenarioKind::GeneralOp => "general_op",
            ScenarioKind::Deletion => "deletion",
            ScenarioKind::NotGate => "not_gate",
            ScenarioKind::YGate => "y_gate",
            ScenarioKind::ZGate => "z_gate",
            ScenarioKind::Hadamard => "hadamard",
            ScenarioKind::Cnot => "cnot",
        }
    }

    pub fn from_key(key: &str) -> Result<Self> {
        ScenarioKind::ALL
            .iter()
            .copied()
            .find(|k| k.key() == key)
            .ok_or_else(|| Error::BadConfig {
                reason: format!("unknown scenario kind: {key}"),
            })
    }

    pub fn mode(self) -> Mode {
        match self {
            ScenarioKind::Cloning | ScenarioKind::GeneralOp | ScenarioKind::Deletion => {
                Mode::BasisDependence
            }
            _ => Mode::RemoteChange,
        }
    }

    /// Whether an independent closed-form evaluation of both reduced states
    /// exists for cross-checking the simulation. Only the deletion experiment
    /// lacks one: its receiver-side mixtures have no published expression to
    /// evaluate independently of the pipeline itself.
    pub fn has_closed_form(self) -> bool {
        self != ScenarioKind::Deletion
    }
}

/// Parameters of the flip experiment: the two superposed input states
/// `psi = a|0> + sqrt(1-a^2)|1>` and `phi = c|0> + sqrt(1-c^2) e^{i theta}|1>`,
/// plus the free rewrite phases `mu` and `nu` granted to the machine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlipParams {
    pub a: f64,
    pub c: f64,
    pub theta: f64,
    pub mu: f64,
    pub nu: f64,
}

impl Default for FlipParams {
    fn default() -> Self {
        let r = 1.0 / libm::sqrt(2.0);
        FlipParams {
            a: r,
            c: r,
            theta: PI / 2.0,
            mu: 0.0,
            nu: 0.0,
        }
    }
}

impl FlipParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("a", self.a), ("c", self.c)] {
            if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                return Err(Error::BadConfig {
                    reason: format!("flip amplitude {name} must lie in [0, 1], got {v}"),
                });
            }
        }
        for (name, v) in [("theta", self.theta), ("mu", self.mu), ("nu", self.nu)] {
            if !v.is_finite() || !(0.0..PI * 2.0).contains(&v) {
                return Err(Error::BadConfig {
                    reason: format!("flip phase {name} must lie in [0, 2*pi), got {v}"),
                });
            }
        }
        Ok(())
    }

    /// The basis generated by `psi` (so its complement is available too).
    pub fn psi_basis(&self) -> Result<QubitBasis> {
        Ok(QubitBasis::from_bloch(BlochAngles::new(
            2.0 * libm::acos(self.a),
            0.0,
        )?))
    }

    /// The basis generated by `phi`.
    pub fn phi_basis(&self) -> Result<QubitBasis> {
        Ok(QubitBasis::from_bloch(BlochAngles::new(
            2.0 * libm::acos(self.c),
            self.theta,
        )?))
    }
}

/// Full description of one experiment run.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub kind: ScenarioKind,
    /// First basis choice (unused by the flip experiment).
    pub basis1: BlochAngles,
    /// Second basis choice (unused by the flip experiment).
    pub basis2: BlochAngles,
    /// Free rewrite phases of the equal-weight rotation machine.
    pub rotation_phases: (f64, f64),
    /// Flip experiment parameters.
    pub flip: FlipParams,
    /// Ancilla tags for the general operation; `None` selects the default map.
    pub f_map: Option<BTreeMap<String, Ket>>,
    /// Distances above this count as signalling.
    pub threshold: f64,
    /// When false the machine is replaced by the do-nothing identity, which
    /// is physical and must produce zero signal.
    pub machine_enabled: bool,
}

impl ScenarioConfig {
    /// The canonical demonstration configuration for a kind: computational
    /// basis against the equatorial basis (polar angle `pi/2`), except for the
    /// equal-weight rotation where `pi/2` happens to make the machine an
    /// honest unitary; that kind compares against polar angle `pi/3` instead.
    pub fn default_for(kind: ScenarioKind) -> Self {
        let second_theta = match kind {
            ScenarioKind::Hadamard => PI / 3.0,
            _ => PI / 2.0,
        };
        ScenarioConfig {
            kind,
            basis1: BlochAngles::new(0.0, 0.0).expect("valid constant"),
            basis2: BlochAngles::new(second_theta, 0.0).expect("valid constant"),
            rotation_phases: (0.0, 0.0),
            flip: FlipParams::default(),
            f_map: None,
            threshold: DEFAULT_SIGNALLING_THRESHOLD,
            machine_enabled: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.threshold.is_finite() || self.threshold <= 0.0 {
            return Err(Error::BadConfig {
                reason: format!(
                    "threshold must be a positive number, got {}",
                    self.threshold
                ),
            });
        }
        if self.kind == ScenarioKind::NotGate {
            self.flip.validate()?;
        }
        if self.kind == ScenarioKind::Hadamard {
            for (name, v) in [
                ("rotation phase 1", self.rotation_phases.0),
                ("rotation phase 2", self.rotation_phases.1),
            ] {
                if !v.is_finite() || !(0.0..PI * 2.0).contains(&v) {
                    return Err(Error::BadConfig {
                        reason: format!("{name} must lie in [0, 2*pi), got {v}"),
                    });
                }
            }
        }
        if self.f_map.is_some() && self.kind != ScenarioKind::GeneralOp {
            return Err(Error::BadConfig {
                reason: format!(
                    "an ancilla tag map only applies to general_op, not {}",
                    self.kind.key()
                ),
            });
        }
        Ok(())
    }
}

/// Did the experiment expose a usable signal?
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Signalling,
    NoSignalling,
}

impl Verdict {
    pub fn from_distance(distance: f64, threshold: f64) -> Verdict {
        if distance > threshold {
            Verdict::Signalling
        } else {
            Verdict::NoSignalling
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            Verdict::Signalling => "signalling",
            Verdict::NoSignalling => "no_signalling",
        }
    }
}

/// Everything a run produces. `rho_left`/`rho_right` are the two reduced
/// states whose trace distance is the signal: before/after the machine in
/// remote-change mode, first/second basis in basis-dependence mode.
#[derive(Debug, Clone)]
pub struct SignallingReport {
    pub kind: ScenarioKind,
    pub mode: Mode,
    pub trace_distance: f64,
    pub verdict: Verdict,
    pub threshold: f64,
    /// Largest entrywise deviation between the simulated reduced states and
    /// their independent closed-form evaluation, where one exists.
    pub closed_form_residual: Option<f64>,
    pub rho_left: DensityMatrix,
    pub rho_right: DensityMatrix,
}

/// Runs one experiment end to end.
pub fn run_scenario(config: &ScenarioConfig) -> Result<SignallingReport> {
    config.validate()?;
    match config.kind.mode() {
        Mode::RemoteChange => run_remote_change(config),
        Mode::BasisDependence => run_basis_dependence(config),
    }
}

/// Which of the report's two reduced states a closed form should evaluate:
/// `Left` is `rho_left` (pre-machine, or the first basis choice), `Right` is
/// `rho_right` (post-machine, or the second basis choice).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

fn unique_names(decomps: &[&TermDecomposition]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for decomp in decomps {
        for term in decomp.terms() {
            if !out.contains(&term.name) {
                out.push(term.name.clone());
            }
        }
    }
    out
}

fn remote_change_pieces(
    config: &ScenarioConfig,
) -> Result<(StateRegistry, TermDecomposition, HypotheticalMachine)> {
    let b1 = QubitBasis::from_bloch(config.basis1);
    let b2 = QubitBasis::from_bloch(config.basis2);
    match config.kind {
        ScenarioKind::NotGate => {
            let psi = config.flip.psi_basis()?;
            let phi = config.flip.phi_basis()?;
            let north = ket_from_bloch(&BlochAngles::new(0.0, 0.0)?);
            let south = ket_from_bloch(&BlochAngles::new(PI, 0.0)?);
            let mut registry = StateRegistry::new();
            registry.insert(names::ZERO, north)?;
            registry.insert(names::PSI, psi.up().clone())?;
            registry.insert(names::PHI, phi.up().clone())?;
            let w = c64(1.0 / libm::sqrt(3.0), 0.0);
            let decomp = TermDecomposition::new(
                3,
                alloc::vec![
                    Term::new(0, w, names::ZERO),
                    Term::new(1, w, names::PSI),
                    Term::new(2, w, names::PHI),
                ],
            )?;
            let machine = flip_machine(&south, &psi, &phi, config.flip.mu, config.flip.nu, None)?;
            Ok((registry, decomp, machine))
        }
        ScenarioKind::YGate | ScenarioKind::ZGate => {
            let mut registry = StateRegistry::new();
            machine::register_two_bases(&mut registry, &b1, &b2)?;
            let w = c64(0.5, 0.0);
            let decomp = TermDecomposition::new(
                4,
                alloc::vec![
                    Term::new(0, w, names::PSI1),
                    Term::new(1, w, names::PSI1_PERP),
                    Term::new(2, w, names::PSI2),
                    Term::new(3, w, names::PSI2_PERP),
                ],
            )?;
            let machine = if config.kind == ScenarioKind::YGate {
                y_gate_machine(&b1, &b2)?
            } else {
                z_gate_machine(&b1, &b2)?
            };
            Ok((registry, decomp, machine))
        }
        ScenarioKind::Hadamard => {
            let mut registry = StateRegistry::new();
            machine::register_two_bases(&mut registry, &b1, &b2)?;
            let w = c64(1.0 / libm::sqrt(2.0), 0.0);
            let decomp = TermDecomposition::new(
                2,
                alloc::vec![Term::new(0, w, names::PSI1), Term::new(1, w, names::PSI2)],
            )?;
            let machine = hadamard_machine(
                &b1,
                &b2,
                config.rotation_phases.0,
                config.rotation_phases.1,
                None,
            )?;
            Ok((registry, decomp, machine))
        }
        ScenarioKind::Cnot => {
            let mut registry = StateRegistry::new();
            machine::register_basis_pairs(&mut registry, 0, &b1)?;
            machine::register_basis_pairs(&mut registry, 1, &b2)?;
            let w = c64(0.5, 0.0);
            let decomp = TermDecomposition::new(
                4,
                alloc::vec![
                    Term::new(0, w, pair_name(names::PSI1_PERP, names::PSI1)),
                    Term::new(1, w, pair_name(names::PSI1_PERP, names::PSI1_PERP)),
                    Term::new(2, w, pair_name(names::PSI2_PERP, names::PSI2)),
                    Term::new(3, w, pair_name(names::PSI2_PERP, names::PSI2_PERP)),
                ],
            )?;
            let machine = cnot_machine(&b1, &b2)?;
            Ok((registry, decomp, machine))
        }
        _ => Err(Error::BadSpec {
            reason: format!("{} is not a remote-change experiment", config.kind.key()),
        }),
    }
}

fn run_remote_change(config: &ScenarioConfig) -> Result<SignallingReport> {
    let (registry, decomp, machine) = remote_change_pieces(config)?;
    let machine = if config.machine_enabled {
        machine
    } else {
        identity_machine(&registry, &unique_names(&[&decomp]))?
    };
    let rho_before = decomp
        .materialize(&registry)?
        .to_density()
        .partial_trace(&[0])?;
    let rho_after = machine
        .apply_to_decomposition(&decomp)?
        .to_density()
        .partial_trace(&[0])?;
    let trace_distance = rho_before.trace_distance(&rho_after)?;
    let closed_form_residual = if config.machine_enabled {
        let cf_before = closed_form_rho(config, Side::Left)?;
        let cf_after = closed_form_rho(config, Side::Right)?;
        let rb = cf_before.matrix().max_abs_diff(rho_before.matrix())?;
        let ra = cf_after.matrix().max_abs_diff(rho_after.matrix())?;
        Some(if rb > ra { rb } else { ra })
    } else {
        None
    };
    Ok(SignallingReport {
        kind: config.kind,
        mode: Mode::RemoteChange,
        trace_distance,
        verdict: Verdict::from_distance(trace_distance, config.threshold),
        threshold: config.threshold,
        closed_form_residual,
        rho_left: rho_before,
        rho_right: rho_after,
    })
}

fn basis_dependence_pieces(
    config: &ScenarioConfig,
) -> Result<(
    StateRegistry,
    TermDecomposition,
    TermDecomposition,
    HypotheticalMachine,
)> {
    let b1 = QubitBasis::from_bloch(config.basis1);
    let b2 = QubitBasis::from_bloch(config.basis2);
    match config.kind {
        ScenarioKind::Cloning | ScenarioKind::GeneralOp => {
            let mut registry = StateRegistry::new();
            machine::register_two_bases(&mut registry, &b1, &b2)?;
            let machine = if config.kind == ScenarioKind::Cloning {
                cloner_machine(&b1, &b2)?
            } else {
                match &config.f_map {
                    Some(map) => general_op_machine(&b1, &b2, map)?,
                    None => general_op_machine(&b1, &b2, &default_f_map(&b1, &b2)?)?,
                }
            };
            Ok((
                registry,
                singlet_decomposition(0)?,
                singlet_decomposition(1)?,
                machine,
            ))
        }
        ScenarioKind::Deletion => {
            let mut registry = StateRegistry::new();
            machine::register_basis_pairs(&mut registry, 0, &b1)?;
            machine::register_basis_pairs(&mut registry, 1, &b2)?;
            let blank = ket_from_bloch(&BlochAngles::new(0.0, 0.0)?);
            let machine = deleter_machine(&b1, &b2, &blank)?;
            Ok((
                registry,
                double_singlet_decomposition(0)?,
                double_singlet_decomposition(1)?,
                machine,
            ))
        }
        _ => Err(Error::BadSpec {
            reason: format!("{} is not a basis-dependence experiment", config.kind.key()),
        }),
    }
}

/// The shared singlet written in the chosen basis, with the receiver's side
/// kept symbolic: sender outcome "up" pairs with the named complement and
/// vice versa, with the antisymmetric sign on the second term.
pub fn singlet_decomposition(basis_index: usize) -> Result<TermDecomposition> {
    let (up, down) = if basis_index == 0 {
        (names::PSI1, names::PSI1_PERP)
    } else {
        (names::PSI2, names::PSI2_PERP)
    };
    let w = 1.0 / libm::sqrt(2.0);
    TermDecomposition::new(
        2,
        alloc::vec![
            Term::new(0, c64(w, 0.0), down),
            Term::new(1, c64(-w, 0.0), up),
        ],
    )
}

/// Two singlets shared in parallel, written in the chosen basis, with the
/// receiver's paired qubits kept symbolic. Sender outcomes run through the
/// four products in lexicographic order; the receiver holds the opposite pair
/// with sign `(-1)^(number of complements on the sender side)`.
pub fn double_singlet_decomposition(basis_index: usize) -> Result<TermDecomposition> {
    let (up, down) = if basis_index == 0 {
        (names::PSI1, names::PSI1_PERP)
    } else {
        (names::PSI2, names::PSI2_PERP)
    };
    TermDecomposition::new(
        4,
        alloc::vec![
            Term::new(0, c64(0.5, 0.0), pair_name(down, down)),
            Term::new(1, c64(-0.5, 0.0), pair_name(down, up)),
            Term::new(2, c64(-0.5, 0.0), pair_name(up, down)),
            Term::new(3, c64(0.5, 0.0), pair_name(up, up)),
        ],
    )
}

fn run_basis_dependence(config: &ScenarioConfig) -> Result<SignallingReport> {
    let (registry, decomp1, decomp2, machine) = basis_dependence_pieces(config)?;
    let machine = if config.machine_enabled {
        machine
    } else {
        identity_machine(&registry, &unique_names(&[&decomp1, &decomp2]))?
    };
    let receiver_rho = |decomp: &TermDecomposition| -> Result<DensityMatrix> {
        let named = decomp.collapse_named()?;
        let ensemble = machine.apply_to_named_ensemble(&named)?;
        let mut rho = ensemble.to_density()?;
        if machine.has_memory() {
            let observable: Vec<usize> = (0..rho.dims().len() - 1).collect();
            rho = rho.partial_trace(&observable)?;
        }
        Ok(rho)
    };
    let rho_left = receiver_rho(&decomp1)?;
    let rho_right = receiver_rho(&decomp2)?;
    let trace_distance = rho_left.trace_distance(&rho_right)?;
    let closed_form_residual = if config.machine_enabled && config.kind.has_closed_form() {
        let cf_left = closed_form_rho(config, Side::Left)?;
        let cf_right = closed_form_rho(config, Side::Right)?;
        let rl = cf_left.matrix().max_abs_diff(rho_left.matrix())?;
        let rr = cf_right.matrix().max_abs_diff(rho_right.matrix())?;
        Some(if rl > rr { rl } else { rr })
    } else {
        None
    };
    Ok(SignallingReport {
        kind: config.kind,
        mode: Mode::BasisDependence,
        trace_distance,
        verdict: Verdict::from_distance(trace_distance, config.threshold),
        threshold: config.threshold,
        closed_form_residual,
        rho_left,
        rho_right,
    })
}

// ---------------------------------------------------------------------------
// Closed forms.
//
// Each remote-change experiment admits a closed-form expression, derivable by
// hand, for the sender-side reduced state: the diagonal is flat and each
// off-diagonal entry is a product of overlaps between the receiver-side
// states attached to the two sender outcomes. These evaluators build those
// matrices entry by entry, independently of the simulation pipeline.
// ---------------------------------------------------------------------------

fn hermitian_fill(m: &mut CMatrix, i: usize, j: usize, v: Complex) {
    m.set(i, j, v);
    m.set(j, i, v.conj());
}

/// Sender-side reduced state of the flip experiment, before or after the
/// machine acts. Optional machine memories contribute overlap factors.
pub fn flip_closed_form(
    params: &FlipParams,
    memories: Option<&[Ket; 3]>,
    side: Side,
) -> Result<DensityMatrix> {
    params.validate()?;
    let psi_basis = params.psi_basis()?;
    let phi_basis = params.phi_basis()?;
    let mem = |i: usize, j: usize| -> Result<Complex> {
        match memories {
            Some(m) => m[i].inner(&m[j]),
            None => Ok(Complex::ONE),
        }
    };
    let third = c64(1.0 / 3.0, 0.0);
    let mut m = CMatrix::identity(3).scale(third);
    match side {
        Side::Left => {
            let zero = ket_from_bloch(&BlochAngles::new(0.0, 0.0)?);
            hermitian_fill(&mut m, 0, 1, psi_basis.up().inner(&zero)? * third);
            hermitian_fill(&mut m, 0, 2, phi_basis.up().inner(&zero)? * third);
            hermitian_fill(&mut m, 1, 2, phi_basis.up().inner(psi_basis.up())? * third);
        }
        Side::Right => {
            let one = ket_from_bloch(&BlochAngles::new(PI, 0.0)?);
            let e_mu = Complex::from_polar(1.0, -params.mu);
            let e_nu = Complex::from_polar(1.0, -params.nu);
            hermitian_fill(
                &mut m,
                0,
                1,
                e_mu * psi_basis.down().inner(&one)? * mem(1, 0)? * third,
            );
            hermitian_fill(
                &mut m,
                0,
                2,
                e_nu * phi_basis.down().inner(&one)? * mem(2, 0)? * third,
            );
            hermitian_fill(
                &mut m,
                1,
                2,
                Complex::from_polar(1.0, params.mu - params.nu)
                    * phi_basis.down().inner(psi_basis.down())?
                    * mem(2, 1)?
                    * third,
            );
        }
    }
    DensityMatrix::new(alloc::vec![3], m)
}

/// Whether a four-term closed form describes the antisymmetric swap or the
/// in-basis phase flip.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FourTermGate {
    SwapWithPhase,
    PhaseFlip,
}

/// Sender-side reduced state for the two four-term experiments.
pub fn four_term_closed_form(
    b1: &QubitBasis,
    b2: &QubitBasis,
    gate: FourTermGate,
    side: Side,
) -> Result<DensityMatrix> {
    let quarter = c64(0.25, 0.0);
    let mut m = CMatrix::identity(4).scale(quarter);
    let (p1, q1) = (b1.up(), b1.down());
    let (p2, q2) = (b2.up(), b2.down());
    match side {
        Side::Left => {
            hermitian_fill(&mut m, 0, 2, p2.inner(p1)? * quarter);
            hermitian_fill(&mut m, 0, 3, q2.inner(p1)? * quarter);
            hermitian_fill(&mut m, 1, 2, p2.inner(q1)? * quarter);
            hermitian_fill(&mut m, 1, 3, q2.inner(q1)? * quarter);
        }
        Side::Right => match gate {
            FourTermGate::SwapWithPhase => {
                hermitian_fill(&mut m, 0, 2, q2.inner(q1)? * quarter);
                hermitian_fill(&mut m, 0, 3, -(p2.inner(q1)?) * quarter);
                hermitian_fill(&mut m, 1, 2, -(q2.inner(p1)?) * quarter);
                hermitian_fill(&mut m, 1, 3, p2.inner(p1)? * quarter);
            }
            FourTermGate::PhaseFlip => {
                hermitian_fill(&mut m, 0, 2, p2.inner(p1)? * quarter);
                hermitian_fill(&mut m, 0, 3, -(q2.inner(p1)?) * quarter);
                hermitian_fill(&mut m, 1, 2, -(p2.inner(q1)?) * quarter);
                hermitian_fill(&mut m, 1, 3, q2.inner(q1)? * quarter);
            }
        },
    }
    DensityMatrix::new(alloc::vec![4], m)
}

/// Sender-side reduced state for the equal-weight rotation experiment.
pub fn rotation_closed_form(
    b1: &QubitBasis,
    b2: &QubitBasis,
    phi1: f64,
    phi2: f64,
    memories: Option<&[Ket; 2]>,
    side: Side,
) -> Result<DensityMatrix> {
    let half = c64(0.5, 0.0);
    let mut m = CMatrix::identity(2).scale(half);
    let (p1, q1) = (b1.up(), b1.down());
    let (p2, q2) = (b2.up(), b2.down());
    let entry = match side {
        Side::Left => p2.inner(p1)? * half,
        Side::Right => {
            let s = p2.inner(p1)?
                + Complex::from_polar(1.0, phi1) * p2.inner(q1)?
                + Complex::from_polar(1.0, -phi2) * q2.inner(p1)?
                + Complex::from_polar(1.0, phi1 - phi2) * q2.inner(q1)?;
            let mem = match memories {
                Some(h) => h[1].inner(&h[0])?,
                None => Complex::ONE,
            };
            s * mem * c64(0.25, 0.0)
        }
    };
    hermitian_fill(&mut m, 0, 1, entry);
    DensityMatrix::new(alloc::vec![2], m)
}

/// Sender-side reduced state for the controlled-flip experiment.
pub fn controlled_flip_closed_form(
    b1: &QubitBasis,
    b2: &QubitBasis,
    side: Side,
) -> Result<DensityMatrix> {
    let quarter = c64(0.25, 0.0);
    let mut m = CMatrix::identity(4).scale(quarter);
    let (p1, q1) = (b1.up(), b1.down());
    let (p2, q2) = (b2.up(), b2.down());
    let control = q2.inner(q1)?;
    match side {
        Side::Left => {
            hermitian_fill(&mut m, 0, 2, control * p2.inner(p1)? * quarter);
            hermitian_fill(&mut m, 0, 3, control * q2.inner(p1)? * quarter);
            hermitian_fill(&mut m, 1, 2, control * p2.inner(q1)? * quarter);
            hermitian_fill(&mut m, 1, 3, control * q2.inner(q1)? * quarter);
        }
        Side::Right => {
            hermitian_fill(&mut m, 0, 2, control * q2.inner(q1)? * quarter);
            hermitian_fill(&mut m, 0, 3, control * p2.inner(q1)? * quarter);
            hermitian_fill(&mut m, 1, 2, control * q2.inner(p1)? * quarter);
            hermitian_fill(&mut m, 1, 3, control * p2.inner(p1)? * quarter);
        }
    }
    DensityMatrix::new(alloc::vec![4], m)
}

/// Receiver-side mixture for the duplication experiment under one basis
/// choice: an equal-weight mixture of the two doubled basis states.
pub fn duplication_closed_form(basis: &QubitBasis) -> Result<DensityMatrix> {
    Ensemble::new(alloc::vec![
        (0.5, basis.down().tensor(basis.down())),
        (0.5, basis.up().tensor(basis.up())),
    ])?
    .to_density()
}

/// Receiver-side mixture for the tagged-ancilla experiment under one basis
/// choice: each basis state arrives alongside its configured ancilla tag.
pub fn tagged_ancilla_closed_form(basis: &QubitBasis, tags: (&Ket, &Ket)) -> Result<DensityMatrix> {
    let (up_tag, down_tag) = tags;
    Ensemble::new(alloc::vec![
        (0.5, basis.down().tensor(down_tag)),
        (0.5, basis.up().tensor(up_tag)),
    ])?
    .to_density()
}

/// Closed-form reduced state for a configured experiment, where one exists;
/// the deletion experiment reports [`Error::NoClosedForm`].
pub fn closed_form_rho(config: &ScenarioConfig, side: Side) -> Result<DensityMatrix> {
    let b1 = QubitBasis::from_bloch(config.basis1);
    let b2 = QubitBasis::from_bloch(config.basis2);
    let basis = match side {
        Side::Left => &b1,
        Side::Right => &b2,
    };
    match config.kind {
        ScenarioKind::Cloning => duplication_closed_form(basis),
        ScenarioKind::GeneralOp => {
            let default_map;
            let map = match &config.f_map {
                Some(map) => map,
                None => {
                    default_map = default_f_map(&b1, &b2)?;
                    &default_map
                }
            };
            let (up_name, down_name) = match side {
                Side::Left => (names::PSI1, names::PSI1_PERP),
                Side::Right => (names::PSI2, names::PSI2_PERP),
            };
            let tag = |name: &str| -> Result<&Ket> {
                map.get(name)
                    .ok_or_else(|| Error::UnmatchedTerm { name: name.into() })
            };
            tagged_ancilla_closed_form(basis, (tag(up_name)?, tag(down_name)?))
        }
        ScenarioKind::NotGate => flip_closed_form(&config.flip, None, side),
        ScenarioKind::YGate => four_term_closed_form(&b1, &b2, FourTermGate::SwapWithPhase, side),
        ScenarioKind::ZGate => four_term_closed_form(&b1, &b2, FourTermGate::PhaseFlip, side),
        ScenarioKind::Hadamard => rotation_closed_form(
            &b1,
            &b2,
            config.rotation_phases.0,
            config.rotation_phases.1,
            None,
            side,
        ),
        ScenarioKind::Cnot => controlled_flip_closed_form(&b1, &b2, side),
        ScenarioKind::Deletion => Err(Error::NoClosedForm {
            kind: config.kind.key(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_run_smoke() {
        let report = run_scenario(&ScenarioConfig::default_for(ScenarioKind::Cloning)).unwrap();
        assert_eq!(report.mode, Mode::BasisDependence);
        assert!((report.trace_distance - 0.5).abs() < 1e-12);
        assert_eq!(report.verdict, Verdict::Signalling);
    }

    #[test]
    fn kind_keys_round_trip() {
        for kind in ScenarioKind::ALL {
            assert_eq!(ScenarioKind::from_key(kind.key()).unwrap(), kind);
        }
        assert!(ScenarioKind::from_key("warp_drive").is_err());
    }

    #[test]
    fn f_map_on_wrong_kind_is_rejected() {
        let mut config = ScenarioConfig::default_for(ScenarioKind::Cloning);
        config.f_map = Some(BTreeMap::new());
        assert!(matches!(
            run_scenario(&config),
            Err(Error::BadConfig { .. })
        ));
    }
}
