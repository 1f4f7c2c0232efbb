//! Parameterized circuits and the ansatz builders.
//!
//! A [`Circuit`] is an ordered list of gate templates whose angles are either
//! fixed or an affine function `scale · θ_name + offset` of a named parameter.
//! Binding substitutes the current parameter values and yields plain
//! [`Gate`]s for the simulator.

mod builders;
mod sign;

pub use builders::{build_brickwork, build_hea, build_qaoa, default_brickwork_depth};
pub use sign::{build_sign_ansatz, SignAnsatz, SignLayer};

use std::f64::consts::PI;

use indexmap::IndexMap;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::qsim::{Gate, GateKind, Statevector};
use crate::rng::Rng;
use crate::{Error, Result};

/// Angle of a gate template.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Angle {
    /// Gate kind takes no angle.
    None,
    Fixed(f64),
    /// `scale · params[name] + offset`.
    Param { name: String, scale: f64, offset: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateTemplate {
    pub kind: GateKind,
    pub targets: Vec<usize>,
    pub angle: Angle,
}

impl GateTemplate {
    pub fn param_name(&self) -> Option<&str> {
        match &self.angle {
            Angle::Param { name, .. } => Some(name),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Circuit {
    pub n_qubits: usize,
    pub gates: Vec<GateTemplate>,
    pub params: IndexMap<String, f64>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self { n_qubits, gates: Vec::new(), params: IndexMap::new() }
    }

    /// Appends a gate without angle.
    pub fn push(&mut self, kind: GateKind, targets: &[usize]) -> &mut Self {
        self.gates.push(GateTemplate { kind, targets: targets.to_vec(), angle: Angle::None });
        self
    }

    pub fn push_fixed(&mut self, kind: GateKind, targets: &[usize], angle: f64) -> &mut Self {
        self.gates.push(GateTemplate { kind, targets: targets.to_vec(), angle: Angle::Fixed(angle) });
        self
    }

    /// Appends a gate driven by parameter `name` (created at 0 if new).
    pub fn push_param(&mut self, kind: GateKind, targets: &[usize], name: &str, scale: f64) -> &mut Self {
        self.params.entry(name.to_string()).or_insert(0.0);
        self.gates.push(GateTemplate {
            kind,
            targets: targets.to_vec(),
            angle: Angle::Param { name: name.to_string(), scale, offset: 0.0 },
        });
        self
    }

    pub fn n_params(&self) -> usize {
        self.params.len()
    }

    pub fn param_names(&self) -> Vec<String> {
        self.params.keys().cloned().collect()
    }

    pub fn param_values(&self) -> Vec<f64> {
        self.params.values().copied().collect()
    }

    pub fn param(&self, name: &str) -> Result<f64> {
        self.params.get(name).copied().ok_or_else(|| Error::UnknownParameter(name.to_string()))
    }

    pub fn set_param(&mut self, name: &str, value: f64) -> Result<()> {
        match self.params.get_mut(name) {
            Some(v) => {
                *v = value;
                Ok(())
            }
            None => Err(Error::UnknownParameter(name.to_string())),
        }
    }

    /// Overwrites all parameters in declaration order.
    pub fn set_param_values(&mut self, values: &[f64]) -> Result<()> {
        if values.len() != self.params.len() {
            return Err(Error::DimensionMismatch { expected: self.params.len(), got: values.len() });
        }
        self.params.values_mut().zip(values).for_each(|(p, v)| *p = *v);
        Ok(())
    }

    /// Independent `U(lo, hi)` draws for every parameter.
    pub fn randomize(&mut self, rng: &mut Rng, lo: f64, hi: f64) {
        for v in self.params.values_mut() {
            *v = rng.random_range(lo..hi);
        }
    }

    /// The default initialization `U(−2π, 2π)`.
    pub fn randomize_default(&mut self, rng: &mut Rng) {
        self.randomize(rng, -2.0 * PI, 2.0 * PI);
    }

    /// Indices of gates driven by `name`.
    pub fn occurrences(&self, name: &str) -> Vec<usize> {
        self.gates
            .iter()
            .enumerate()
            .filter(|(_, g)| g.param_name() == Some(name))
            .map(|(i, _)| i)
            .collect()
    }

    /// Appends `other`'s gates and parameters. Shared names must carry equal values.
    pub fn extend(&mut self, other: &Circuit) -> Result<()> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits, got: other.n_qubits });
        }
        for (name, &value) in &other.params {
            match self.params.get(name) {
                Some(&v) if v != value => {
                    return Err(Error::InvalidCircuit(format!("parameter `{name}` bound twice with different values")))
                }
                _ => {
                    self.params.insert(name.clone(), value);
                }
            }
        }
        self.gates.extend(other.gates.iter().cloned());
        Ok(())
    }

    fn resolve(&self, t: &GateTemplate, extra_offset: f64) -> Result<Gate> {
        let angle = match &t.angle {
            Angle::None => None,
            Angle::Fixed(a) => Some(*a + extra_offset),
            Angle::Param { name, scale, offset } => Some(scale * self.param(name)? + offset + extra_offset),
        };
        let gate = Gate::new(t.kind, t.targets.clone(), angle);
        gate.validate(self.n_qubits)?;
        Ok(gate)
    }

    /// Concrete gates at the current parameter values.
    pub fn bind(&self) -> Result<Vec<Gate>> {
        self.gates.iter().map(|t| self.resolve(t, 0.0)).collect()
    }

    /// Like [`Circuit::bind`] with gate `index`'s angle shifted by `delta`.
    pub fn bind_shifted(&self, index: usize, delta: f64) -> Result<Vec<Gate>> {
        if index >= self.gates.len() || !self.gates[index].kind.is_parameterized() {
            return Err(Error::InvalidCircuit(format!("gate {index} has no angle to shift")));
        }
        self.gates
            .iter()
            .enumerate()
            .map(|(i, t)| self.resolve(t, if i == index { delta } else { 0.0 }))
            .collect()
    }

    /// Checks every gate against the register and every parameter reference.
    pub fn validate(&self) -> Result<()> {
        self.bind().map(|_| ())
    }

    /// True when every gate is diagonal in the computational basis.
    pub fn is_diagonal(&self) -> bool {
        self.gates.iter().all(|g| g.kind.is_diagonal())
    }

    /// `U |0…0⟩`.
    pub fn simulate(&self) -> Result<Statevector> {
        let mut sv = Statevector::zero(self.n_qubits)?;
        for g in self.bind()? {
            sv.apply_unchecked(&g);
        }
        Ok(sv)
    }

    /// `U |ψ⟩`.
    pub fn apply_to(&self, state: &Statevector) -> Result<Statevector> {
        if state.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits, got: state.n_qubits() });
        }
        let mut sv = state.clone();
        for g in self.bind()? {
            sv.apply_unchecked(&g);
        }
        Ok(sv)
    }

    pub fn count_gates(&self, kind: GateKind) -> usize {
        self.gates.iter().filter(|g| g.kind == kind).count()
    }
}
