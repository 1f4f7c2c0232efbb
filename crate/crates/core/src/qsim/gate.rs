use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

/// Gate kinds understood by the simulator.
///
/// Rotations use the half-angle convention `R_P(θ) = exp(-i θ P / 2)`:
/// `Rz(θ) = diag(e^{-iθ/2}, e^{iθ/2})`, `Ry(θ) = [[cos θ/2, -sin θ/2], [sin θ/2, cos θ/2]]`,
/// `Rzz(θ) = exp(-i θ/2 Z⊗Z)`.
///
/// `XP`/`XM`/`YP`/`YM` are the fixed rotations `Rx(±π/2)` / `Ry(±π/2)` used by
/// the native decompositions of [`native_decomposition`]:
/// `CNOT = YM(t) · CZ · YP(t)`, `Ry(θ) = XP · Rz(θ) · XM` (listed in time order).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    S,
    Sdg,
    Rx,
    Ry,
    Rz,
    Rzz,
    Cnot,
    Cz,
    Xp,
    Xm,
    Yp,
    Ym,
}

/// Magnitude of the fixed XP/XM/YP/YM rotations.
pub const FIXED_ROTATION_ANGLE: f64 = FRAC_PI_2;

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::Rzz | GateKind::Cnot | GateKind::Cz => 2,
            _ => 1,
        }
    }

    pub fn is_parameterized(self) -> bool {
        matches!(self, GateKind::Rx | GateKind::Ry | GateKind::Rz | GateKind::Rzz)
    }

    /// Diagonal in the computational basis.
    pub fn is_diagonal(self) -> bool {
        matches!(
            self,
            GateKind::Z | GateKind::S | GateKind::Sdg | GateKind::Rz | GateKind::Rzz | GateKind::Cz
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
            GateKind::S => "S",
            GateKind::Sdg => "SDG",
            GateKind::Rx => "RX",
            GateKind::Ry => "RY",
            GateKind::Rz => "RZ",
            GateKind::Rzz => "RZZ",
            GateKind::Cnot => "CNOT",
            GateKind::Cz => "CZ",
            GateKind::Xp => "XP",
            GateKind::Xm => "XM",
            GateKind::Yp => "YP",
            GateKind::Ym => "YM",
        }
    }
}

/// A concrete gate: kind, target qubits and (for rotations) a bound angle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub kind: GateKind,
    pub targets: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
}

impl Gate {
    pub fn new(kind: GateKind, targets: Vec<usize>, angle: Option<f64>) -> Self {
        Self { kind, targets, angle }
    }

    pub fn fixed(kind: GateKind, q: usize) -> Self {
        Self::new(kind, vec![q], None)
    }

    pub fn h(q: usize) -> Self {
        Self::fixed(GateKind::H, q)
    }

    pub fn x(q: usize) -> Self {
        Self::fixed(GateKind::X, q)
    }

    pub fn rx(q: usize, theta: f64) -> Self {
        Self::new(GateKind::Rx, vec![q], Some(theta))
    }

    pub fn ry(q: usize, theta: f64) -> Self {
        Self::new(GateKind::Ry, vec![q], Some(theta))
    }

    pub fn rz(q: usize, theta: f64) -> Self {
        Self::new(GateKind::Rz, vec![q], Some(theta))
    }

    pub fn rzz(a: usize, b: usize, theta: f64) -> Self {
        Self::new(GateKind::Rzz, vec![a, b], Some(theta))
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Self::new(GateKind::Cnot, vec![control, target], None)
    }

    pub fn cz(a: usize, b: usize) -> Self {
        Self::new(GateKind::Cz, vec![a, b], None)
    }

    /// Checks arity, distinct in-range targets and a finite angle where one is required.
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        if self.targets.len() != self.kind.arity() {
            return Err(Error::InvalidGate(format!(
                "{} expects {} target(s), got {}",
                self.kind.name(),
                self.kind.arity(),
                self.targets.len()
            )));
        }
        for &q in &self.targets {
            if q >= n_qubits {
                return Err(Error::QubitOutOfRange { index: q, n_qubits });
            }
        }
        if self.targets.len() == 2 && self.targets[0] == self.targets[1] {
            return Err(Error::RepeatedTarget(self.targets.clone()));
        }
        match (self.kind.is_parameterized(), self.angle) {
            (true, None) => Err(Error::InvalidGate(format!("{} requires an angle", self.kind.name()))),
            (true, Some(a)) if !a.is_finite() => Err(Error::NonFiniteAngle(a)),
            (false, Some(_)) => Err(Error::InvalidGate(format!("{} takes no angle", self.kind.name()))),
            _ => Ok(()),
        }
    }

    /// 2×2 unitary for single-qubit kinds, row-major.
    pub fn matrix_1q(&self) -> Option<[[C64; 2]; 2]> {
        let z = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        let theta = self.angle.unwrap_or(0.0);
        let m = match self.kind {
            GateKind::H => {
                let h = C64::new(FRAC_1_SQRT_2, 0.0);
                [[h, h], [h, -h]]
            }
            GateKind::X => [[z, one], [one, z]],
            GateKind::Y => [[z, -i], [i, z]],
            GateKind::Z => [[one, z], [z, -one]],
            GateKind::S => [[one, z], [z, i]],
            GateKind::Sdg => [[one, z], [z, -i]],
            GateKind::Rx => rx_matrix(theta),
            GateKind::Ry => ry_matrix(theta),
            GateKind::Rz => {
                let h = theta / 2.0;
                [[C64::from_polar(1.0, -h), z], [z, C64::from_polar(1.0, h)]]
            }
            GateKind::Xp => rx_matrix(FIXED_ROTATION_ANGLE),
            GateKind::Xm => rx_matrix(-FIXED_ROTATION_ANGLE),
            GateKind::Yp => ry_matrix(FIXED_ROTATION_ANGLE),
            GateKind::Ym => ry_matrix(-FIXED_ROTATION_ANGLE),
            GateKind::Rzz | GateKind::Cnot | GateKind::Cz => return None,
        };
        Some(m)
    }
}

fn rx_matrix(theta: f64) -> [[C64; 2]; 2] {
    let (s, c) = (theta / 2.0).sin_cos();
    [
        [C64::new(c, 0.0), C64::new(0.0, -s)],
        [C64::new(0.0, -s), C64::new(c, 0.0)],
    ]
}

fn ry_matrix(theta: f64) -> [[C64; 2]; 2] {
    let (s, c) = (theta / 2.0).sin_cos();
    [[C64::new(c, 0.0), C64::new(-s, 0.0)], [C64::new(s, 0.0), C64::new(c, 0.0)]]
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind.name())?;
        if let Some(a) = self.angle {
            write!(f, "({a:.6})")?;
        }
        let qs: Vec<String> = self.targets.iter().map(|q| q.to_string()).collect();
        write!(f, " {}", qs.join(","))
    }
}

/// Rewrites a gate into the native set {H, Rz, CZ, XP, XM, YP, YM} plus fixed
/// Paulis and phase gates.
///
/// `Rzz(θ) → CNOT · Rz_t(θ) · CNOT`, `CNOT → YM_t · CZ · YP_t`, `Ry(θ) → XP · Rz(θ) · XM`,
/// `Rx(θ) → H · Rz(θ) · H`. All identities hold exactly (no global phase).
pub fn native_decomposition(gate: &Gate) -> Vec<Gate> {
    let t = &gate.targets;
    match gate.kind {
        GateKind::Cnot => vec![
            Gate::fixed(GateKind::Ym, t[1]),
            Gate::cz(t[0], t[1]),
            Gate::fixed(GateKind::Yp, t[1]),
        ],
        GateKind::Rzz => {
            let theta = gate.angle.unwrap_or(0.0);
            let mut out = native_decomposition(&Gate::cnot(t[0], t[1]));
            out.push(Gate::rz(t[1], theta));
            out.extend(native_decomposition(&Gate::cnot(t[0], t[1])));
            out
        }
        GateKind::Ry => vec![
            Gate::fixed(GateKind::Xp, t[0]),
            Gate::rz(t[0], gate.angle.unwrap_or(0.0)),
            Gate::fixed(GateKind::Xm, t[0]),
        ],
        GateKind::Rx => vec![Gate::h(t[0]), Gate::rz(t[0], gate.angle.unwrap_or(0.0)), Gate::h(t[0])],
        _ => vec![gate.clone()],
    }
}
