//! Hypothetical gate machines as name-keyed rewrite systems.
//!
//! The machines studied here are defined by what they do to specific *named*
//! states ("turn this state into that one"), not by a linear operator, and
//! most of them cannot be extended to a linear map at all. To honor that, a
//! machine is a table of rewrite rules keyed by state name. Entangled states
//! are carried around as formal sums of (partner index, named local state)
//! terms, and a machine acts by rewriting each named term — exactly the formal
//! manipulation the machines promise, with no linearity assumed.
//!
//! Numeric states only appear when a formal sum is materialized against a
//! [`StateRegistry`] that binds names to kets.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{c64, CVector, Complex};
use crate::quantum::{Ensemble, Ket, QubitBasis};
use crate::tol::{EQUALITY_TOL, NORM_TOL, PROB_EPSILON};

/// Binds state names to concrete kets.
#[derive(Debug, Clone, Default)]
pub struct StateRegistry {
    map: BTreeMap<String, Ket>,
}

impl StateRegistry {
    pub fn new() -> Self {
        StateRegistry {
            map: BTreeMap::new(),
        }
    }

    /// Registers a name; re-registering an existing name is rejected so a
    /// name can never silently change meaning mid-analysis.
    pub fn insert(&mut self, name: impl Into<String>, ket: Ket) -> Result<()> {
        let name = name.into();
        if self.map.contains_key(&name) {
            return Err(Error::BadSpec {
                reason: format!("state name registered twice: {name}"),
            });
        }
        self.map.insert(name, ket);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&Ket> {
        self.map.get(name).ok_or_else(|| Error::UnmatchedTerm {
            name: name.to_string(),
        })
    }

    pub fn contains(&self, name: &str) -> bool {
        self.map.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.map.keys().map(|s| s.as_str())
    }
}

/// Canonical name for an ordered pair of named states, used when a machine
/// acts on two local qubits at once.
pub fn pair_name(first: &str, second: &str) -> String {
    format!("({first},{second})")
}

/// One term of a formal entangled sum: `coeff * |partner_index> (x) |bob_name>`.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub partner_index: usize,
    pub coeff: Complex,
    pub name: String,
}

impl Term {
    pub fn new(partner_index: usize, coeff: Complex, name: impl Into<String>) -> Self {
        Term {
            partner_index,
            coeff,
            name: name.into(),
        }
    }
}

/// A bipartite pure state written as a formal sum over an orthonormal family
/// on the partner side and *named* states on the local side.
///
/// The partner states are the computational basis of a `partner_dim`-level
/// system; the local states stay symbolic until materialized.
#[derive(Debug, Clone)]
pub struct TermDecomposition {
    partner_dim: usize,
    terms: Vec<Term>,
}

impl TermDecomposition {
    /// Validates index ranges and unit total weight.
    pub fn new(partner_dim: usize, terms: Vec<Term>) -> Result<Self> {
        if partner_dim == 0 || terms.is_empty() {
            return Err(Error::BadSpec {
                reason: "a decomposition needs a partner system and at least one term".into(),
            });
        }
        let mut weight = 0.0;
        for term in &terms {
            if term.partner_index >= partner_dim {
                return Err(Error::BadSubsystemIndex {
                    index: term.partner_index,
                });
            }
            weight += term.coeff.norm_sqr();
        }
        if libm::fabs(weight - 1.0) > EQUALITY_TOL {
            return Err(Error::NotNormalized {
                norm: libm::sqrt(weight),
            });
        }
        Ok(TermDecomposition { partner_dim, terms })
    }

    pub fn partner_dim(&self) -> usize {
        self.partner_dim
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Builds the concrete joint ket, resolving every name via the registry.
    /// Subsystem layout: `[partner_dim, local subsystems...]`.
    pub fn materialize(&self, registry: &StateRegistry) -> Result<Ket> {
        let first = registry.get(&self.terms[0].name)?;
        let local_dims: Vec<usize> = first.dims().to_vec();
        let local_dim = first.dim();
        let mut amps = CVector::zeros(self.partner_dim * local_dim);
        for term in &self.terms {
            let local = registry.get(&term.name)?;
            if local.dims() != local_dims.as_slice() {
                return Err(Error::DimMismatch {
                    left: local_dim,
                    right: local.dim(),
                });
            }
            let base = term.partner_index * local_dim;
            for j in 0..local_dim {
                let v = amps.get(base + j) + term.coeff * local.amplitudes().get(j);
                amps.set(base + j, v);
            }
        }
        let mut dims = Vec::with_capacity(1 + local_dims.len());
        dims.push(self.partner_dim);
        dims.extend_from_slice(&local_dims);
        Ket::new(dims, amps)
    }

    /// The mixture the local side holds once the partner side has been
    /// measured in its orthonormal family: each outcome keeps its named state
    /// with probability `|coeff|^2`.
    ///
    /// This is only meaningful when every partner outcome pairs with a single
    /// named state, so duplicate partner indices are rejected.
    pub fn collapse_named(&self) -> Result<NamedEnsemble> {
        let mut seen: BTreeMap<usize, ()> = BTreeMap::new();
        let mut entries = Vec::new();
        for term in &self.terms {
            if seen.insert(term.partner_index, ()).is_some() {
                return Err(Error::BadSpec {
                    reason: format!(
                        "partner outcome {} pairs with more than one named state",
                        term.partner_index
                    ),
                });
            }
            let p = term.coeff.norm_sqr();
            if p > PROB_EPSILON {
                entries.push((p, term.name.clone()));
            }
        }
        if entries.is_empty() {
            return Err(Error::EmptyEnsemble);
        }
        Ok(NamedEnsemble { entries })
    }
}

/// A classical mixture over named states.
#[derive(Debug, Clone)]
pub struct NamedEnsemble {
    entries: Vec<(f64, String)>,
}

impl NamedEnsemble {
    pub fn entries(&self) -> &[(f64, String)] {
        &self.entries
    }
}

/// One rewrite rule: the named input state becomes `phase * output`, and the
/// machine's own memory (if it has one) is left in `machine_state`.
#[derive(Debug, Clone)]
pub struct RewriteRule {
    input: String,
    phase: Complex,
    output: Ket,
    machine_state: Option<Ket>,
}

impl RewriteRule {
    pub fn new(
        input: impl Into<String>,
        phase: Complex,
        output: Ket,
        machine_state: Option<Ket>,
    ) -> Self {
        RewriteRule {
            input: input.into(),
            phase,
            output,
            machine_state,
        }
    }

    pub fn input(&self) -> &str {
        &self.input
    }

    pub fn phase(&self) -> Complex {
        self.phase
    }

    pub fn output(&self) -> &Ket {
        &self.output
    }

    pub fn machine_state(&self) -> Option<&Ket> {
        self.machine_state.as_ref()
    }

    /// Output ket including the machine memory factor, if any.
    fn full_output(&self) -> Ket {
        match &self.machine_state {
            Some(mem) => self.output.tensor(mem),
            None => self.output.clone(),
        }
    }
}

/// A hypothetical machine: a finite table of name-keyed rewrite rules.
///
/// States the table does not mention are simply outside the machine's
/// contract; feeding one in surfaces as [`Error::UnmatchedTerm`].
#[derive(Debug, Clone)]
pub struct HypotheticalMachine {
    name: String,
    rules: BTreeMap<String, RewriteRule>,
}

impl HypotheticalMachine {
    /// Validates the rule table: unique inputs, unit-modulus phases,
    /// consistent output shapes, and an all-or-nothing machine memory.
    pub fn new(name: impl Into<String>, rules: Vec<RewriteRule>) -> Result<Self> {
        let name = name.into();
        if rules.is_empty() {
            return Err(Error::BadSpec {
                reason: format!("machine {name} has no rules"),
            });
        }
        let out_dims = rules[0].output.dims().to_vec();
        let memory_dims = rules[0].machine_state.as_ref().map(|m| m.dims().to_vec());
        let mut table = BTreeMap::new();
        for rule in rules {
            if libm::fabs(rule.phase.norm() - 1.0) > NORM_TOL {
                return Err(Error::OutOfRange {
                    what: "rewrite phase modulus",
                    value: rule.phase.norm(),
                });
            }
            if rule.output.dims() != out_dims.as_slice() {
                return Err(Error::DimMismatch {
                    left: out_dims.iter().product(),
                    right: rule.output.dim(),
                });
            }
            let rule_memory = rule.machine_state.as_ref().map(|m| m.dims().to_vec());
            if rule_memory != memory_dims {
                return Err(Error::BadSpec {
                    reason: format!(
                        "machine {name}: every rule must agree on having (and shaping) a memory"
                    ),
                });
            }
            let input = rule.input.clone();
            if table.insert(input.clone(), rule).is_some() {
                return Err(Error::BadSpec {
                    reason: format!("machine {name} has two rules for input {input}"),
                });
            }
        }
        Ok(HypotheticalMachine { name, rules: table })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rule_for(&self, input: &str) -> Result<&RewriteRule> {
        self.rules.get(input).ok_or_else(|| Error::UnmatchedTerm {
            name: input.to_string(),
        })
    }

    pub fn rule_inputs(&self) -> impl Iterator<Item = &str> {
        self.rules.keys().map(|s| s.as_str())
    }

    /// Rewrites every named term of an entangled sum and materializes the
    /// resulting joint ket. Layout: `[partner_dim, outputs..., memory?]`.
    pub fn apply_to_decomposition(&self, decomp: &TermDecomposition) -> Result<Ket> {
        let first_rule = self.rule_for(&decomp.terms()[0].name)?;
        let template = first_rule.full_output();
        let local_dims: Vec<usize> = template.dims().to_vec();
        let local_dim = template.dim();
        let mut amps = CVector::zeros(decomp.partner_dim() * local_dim);
        for term in decomp.terms() {
            let rule = self.rule_for(&term.name)?;
            let out = rule.full_output();
            let weight = term.coeff * rule.phase;
            let base = term.partner_index * local_dim;
            for j in 0..local_dim {
                let v = amps.get(base + j) + weight * out.amplitudes().get(j);
                amps.set(base + j, v);
            }
        }
        let mut dims = Vec::with_capacity(1 + local_dims.len());
        dims.push(decomp.partner_dim());
        dims.extend_from_slice(&local_dims);
        Ket::new(dims, amps)
    }

    /// Rewrites each member of a named mixture. Rewrite phases are global
    /// phases of individual mixture members and so are dropped.
    pub fn apply_to_named_ensemble(&self, ensemble: &NamedEnsemble) -> Result<Ensemble> {
        let mut entries = Vec::with_capacity(ensemble.entries().len());
        for (p, name) in ensemble.entries() {
            let rule = self.rule_for(name)?;
            entries.push((*p, rule.full_output()));
        }
        Ensemble::new(entries)
    }

    /// Whether the rules carry a machine memory factor.
    pub fn has_memory(&self) -> bool {
        self.rules
            .values()
            .next()
            .is_some_and(|r| r.machine_state.is_some())
    }
}

/// A machine that rewrites every listed name to its registered ket unchanged.
/// This is the "do nothing" physical baseline.
pub fn identity_machine(registry: &StateRegistry, names: &[String]) -> Result<HypotheticalMachine> {
    let mut rules = Vec::with_capacity(names.len());
    for name in names {
        rules.push(RewriteRule::new(
            name.clone(),
            Complex::ONE,
            registry.get(name)?.clone(),
            None,
        ));
    }
    HypotheticalMachine::new("identity", rules)
}

/// Names for the states generated from the two single-qubit bases a
/// signalling experiment compares.
pub mod names {
    /// Ket of the first basis.
    pub const PSI1: &str = "psi1";
    /// Orthogonal complement in the first basis.
    pub const PSI1_PERP: &str = "psi1_perp";
    /// Ket of the second basis.
    pub const PSI2: &str = "psi2";
    /// Orthogonal complement in the second basis.
    pub const PSI2_PERP: &str = "psi2_perp";
    /// Reference state rewritten by the flip machine.
    pub const ZERO: &str = "zero";
    /// First flip-machine input.
    pub const PSI: &str = "psi";
    /// Second flip-machine input.
    pub const PHI: &str = "phi";
}

/// Registers the four basis states of the two compared bases under their
/// canonical names.
pub fn register_two_bases(
    registry: &mut StateRegistry,
    basis1: &QubitBasis,
    basis2: &QubitBasis,
) -> Result<()> {
    registry.insert(names::PSI1, basis1.up().clone())?;
    registry.insert(names::PSI1_PERP, basis1.down().clone())?;
    registry.insert(names::PSI2, basis2.up().clone())?;
    registry.insert(names::PSI2_PERP, basis2.down().clone())?;
    Ok(())
}

fn basis_names(index: usize) -> (&'static str, &'static str) {
    if index == 0 {
        (names::PSI1, names::PSI1_PERP)
    } else {
        (names::PSI2, names::PSI2_PERP)
    }
}

/// Copier: each named basis state gains an identical twin.
pub fn cloner_machine(basis1: &QubitBasis, basis2: &QubitBasis) -> Result<HypotheticalMachine> {
    let mut rules = Vec::new();
    for (index, basis) in [basis1, basis2].iter().enumerate() {
        let (up_name, down_name) = basis_names(index);
        rules.push(RewriteRule::new(
            up_name,
            Complex::ONE,
            basis.up().tensor(basis.up()),
            None,
        ));
        rules.push(RewriteRule::new(
            down_name,
            Complex::ONE,
            basis.down().tensor(basis.down()),
            None,
        ));
    }
    HypotheticalMachine::new("cloner", rules)
}

/// The most general state-dependent operation: each named state `k` is sent
/// to `k (x) F(k)` for an arbitrary state-indexed map `F` into an ancilla.
///
/// `f_map` may be partial; names it misses are simply not in the machine's
/// contract and fail at application time.
pub fn general_op_machine(
    basis1: &QubitBasis,
    basis2: &QubitBasis,
    f_map: &BTreeMap<String, Ket>,
) -> Result<HypotheticalMachine> {
    let mut rules = Vec::new();
    for (index, basis) in [basis1, basis2].iter().enumerate() {
        let (up_name, down_name) = basis_names(index);
        for (name, ket) in [(up_name, basis.up()), (down_name, basis.down())] {
            if let Some(tag) = f_map.get(name) {
                rules.push(RewriteRule::new(name, Complex::ONE, ket.tensor(tag), None));
            }
        }
    }
    HypotheticalMachine::new("general_op", rules)
}

/// Default ancilla map for [`general_op_machine`]: the four named states are
/// tagged with distinct four-level basis states, except that names bound to
/// physically identical kets receive identical tags. Without that exception
/// the map would claim to distinguish indistinguishable states, which no
/// operation — hypothetical or not — is entitled to.
pub fn default_f_map(basis1: &QubitBasis, basis2: &QubitBasis) -> Result<BTreeMap<String, Ket>> {
    let mut level = |i: usize| -> Ket {
        let mut amps = CVector::zeros(4);
        amps.set(i, Complex::ONE);
        Ket::new(alloc::vec![4], amps).expect("basis states are normalized")
    };
    let e: Vec<Ket> = (0..4).map(&mut level).collect();
    let mut map = BTreeMap::new();
    map.insert(names::PSI1.to_string(), e[0].clone());
    map.insert(names::PSI1_PERP.to_string(), e[1].clone());
    let assignments = [
        (names::PSI2, basis2.up(), e[2].clone()),
        (names::PSI2_PERP, basis2.down(), e[3].clone()),
    ];
    for (name, ket, fresh) in assignments {
        let same_up = ket.inner(basis1.up())?.norm() > 1.0 - EQUALITY_TOL;
        let same_down = ket.inner(basis1.down())?.norm() > 1.0 - EQUALITY_TOL;
        let tag = if same_up {
            e[0].clone()
        } else if same_down {
            e[1].clone()
        } else {
            fresh
        };
        map.insert(name.to_string(), tag);
    }
    Ok(map)
}

/// Registers the four ordered pairs of a basis's states under their pair
/// names, for machines that act on two local qubits.
pub fn register_basis_pairs(
    registry: &mut StateRegistry,
    index: usize,
    basis: &QubitBasis,
) -> Result<()> {
    let (up_name, down_name) = basis_names(index);
    let named = [(up_name, basis.up()), (down_name, basis.down())];
    for (first_name, first) in named.iter() {
        for (second_name, second) in named.iter() {
            registry.insert(pair_name(first_name, second_name), first.tensor(second))?;
        }
    }
    Ok(())
}

/// Deleter: an identical pair collapses to one copy plus the blank state;
/// non-identical pairs pass through untouched.
pub fn deleter_machine(
    basis1: &QubitBasis,
    basis2: &QubitBasis,
    blank: &Ket,
) -> Result<HypotheticalMachine> {
    let mut rules = Vec::new();
    for (index, basis) in [basis1, basis2].iter().enumerate() {
        let (up_name, down_name) = basis_names(index);
        let named = [(up_name, basis.up()), (down_name, basis.down())];
        for (first_name, first) in named.iter() {
            for (second_name, second) in named.iter() {
                let output = if first_name == second_name {
                    (*first).tensor(blank)
                } else {
                    (*first).tensor(second)
                };
                rules.push(RewriteRule::new(
                    pair_name(first_name, second_name),
                    Complex::ONE,
                    output,
                    None,
                ));
            }
        }
    }
    HypotheticalMachine::new("deleter", rules)
}

/// Flipper: sends the reference state to its opposite pole and each of two
/// named states to its orthogonal complement, with adjustable phases and an
/// optional per-rule machine memory.
pub fn flip_machine(
    zero_out: &Ket,
    psi_basis: &QubitBasis,
    phi_basis: &QubitBasis,
    mu: f64,
    nu: f64,
    memories: Option<&[Ket; 3]>,
) -> Result<HypotheticalMachine> {
    let mem = |i: usize| memories.map(|m| m[i].clone());
    let rules = alloc::vec![
        RewriteRule::new(names::ZERO, Complex::ONE, zero_out.clone(), mem(0)),
        RewriteRule::new(
            names::PSI,
            Complex::from_polar(1.0, mu),
            psi_basis.down().clone(),
            mem(1),
        ),
        RewriteRule::new(
            names::PHI,
            Complex::from_polar(1.0, nu),
            phi_basis.down().clone(),
            mem(2),
        ),
    ];
    HypotheticalMachine::new("flip", rules)
}

/// Bit flip tied to each state's own basis: every named state swaps with its
/// complement, picking up the antisymmetric phase pair `-i`/`+i`.
pub fn y_gate_machine(basis1: &QubitBasis, basis2: &QubitBasis) -> Result<HypotheticalMachine> {
    let mut rules = Vec::new();
    for (index, basis) in [basis1, basis2].iter().enumerate() {
        let (up_name, down_name) = basis_names(index);
        rules.push(RewriteRule::new(
            up_name,
            c64(0.0, -1.0),
            basis.down().clone(),
            None,
        ));
        rules.push(RewriteRule::new(
            down_name,
            c64(0.0, 1.0),
            basis.up().clone(),
            None,
        ));
    }
    HypotheticalMachine::new("y_gate", rules)
}

/// Phase flip tied to each state's own basis: named kets keep their state but
/// the complement member of each basis is negated.
pub fn z_gate_machine(basis1: &QubitBasis, basis2: &QubitBasis) -> Result<HypotheticalMachine> {
    let mut rules = Vec::new();
    for (index, basis) in [basis1, basis2].iter().enumerate() {
        let (up_name, down_name) = basis_names(index);
        rules.push(RewriteRule::new(
            up_name,
            Complex::ONE,
            basis.up().clone(),
            None,
        ));
        rules.push(RewriteRule::new(
            down_name,
            c64(-1.0, 0.0),
            basis.down().clone(),
            None,
        ));
    }
    HypotheticalMachine::new("z_gate", rules)
}

/// Equal-weight rotation tied to each state's own basis: a named ket becomes
/// `(k + e^{i phi} k_perp)/sqrt(2)`, with an optional machine memory per rule.
pub fn hadamard_machine(
    basis1: &QubitBasis,
    basis2: &QubitBasis,
    phi1: f64,
    phi2: f64,
    memories: Option<&[Ket; 2]>,
) -> Result<HypotheticalMachine> {
    let mut rules = Vec::new();
    for (index, (basis, phi)) in [(basis1, phi1), (basis2, phi2)].iter().enumerate() {
        let (up_name, _) = basis_names(index);
        let amps = basis
            .up()
            .amplitudes()
            .add(
                &basis
                    .down()
                    .amplitudes()
                    .scale(Complex::from_polar(1.0, *phi)),
            )
            .expect("qubit dims agree")
            .scale(c64(1.0 / libm::sqrt(2.0), 0.0));
        let output = Ket::new(alloc::vec![2], amps)?;
        rules.push(RewriteRule::new(
            up_name,
            Complex::ONE,
            output,
            memories.map(|m| m[index].clone()),
        ));
    }
    HypotheticalMachine::new("hadamard", rules)
}

/// Controlled flip tied to each basis: when the first (control) qubit of a
/// named pair is the complement state, the second (target) qubit swaps with
/// its complement; otherwise the pair passes through.
pub fn cnot_machine(basis1: &QubitBasis, basis2: &QubitBasis) -> Result<HypotheticalMachine> {
    let mut rules = Vec::new();
    for (index, basis) in [basis1, basis2].iter().enumerate() {
        let (up_name, down_name) = basis_names(index);
        let up = basis.up();
        let down = basis.down();
        rules.push(RewriteRule::new(
            pair_name(up_name, up_name),
            Complex::ONE,
            up.tensor(up),
            None,
        ));
        rules.push(RewriteRule::new(
            pair_name(up_name, down_name),
            Complex::ONE,
            up.tensor(down),
            None,
        ));
        rules.push(RewriteRule::new(
            pair_name(down_name, up_name),
            Complex::ONE,
            down.tensor(down),
            None,
        ));
        rules.push(RewriteRule::new(
            pair_name(down_name, down_name),
            Complex::ONE,
            down.tensor(up),
            None,
        ));
    }
    HypotheticalMachine::new("cnot", rules)
}
