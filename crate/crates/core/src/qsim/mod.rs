//! Dense statevector simulation.
//!
//! Basis index `s` encodes qubit 0 as the most significant bit. All gate
//! application is in place on a `Vec<C64>` of length `2^n`.

mod gate;
mod noise;

pub use gate::{native_decomposition, Gate, GateKind, FIXED_ROTATION_ANGLE};
pub use noise::{apply_noisy, run_noisy_trajectory, NoiseSpec};

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::pauli::PauliString;
use crate::rng::Rng;
use crate::{Error, Result, C64};

pub const MAX_QUBITS: usize = 14;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Statevector {
    n_qubits: usize,
    amps: Vec<C64>,
}

/// Bit mask of qubit `q` in an `n`-qubit basis index.
#[inline]
pub fn qubit_mask(n_qubits: usize, q: usize) -> usize {
    1 << (n_qubits - 1 - q)
}

/// Renders basis index `s` as a bitstring, qubit 0 first.
pub fn format_bitstring(s: usize, n_qubits: usize) -> String {
    (0..n_qubits)
        .map(|q| if s & qubit_mask(n_qubits, q) != 0 { '1' } else { '0' })
        .collect()
}

/// Parses a bitstring written qubit 0 first.
pub fn parse_bitstring(text: &str) -> Result<usize> {
    let mut s = 0usize;
    for ch in text.chars() {
        s = (s << 1)
            | match ch {
                '0' => 0,
                '1' => 1,
                other => return Err(Error::InvalidCircuit(format!("bad bit `{other}`"))),
            };
    }
    Ok(s)
}

impl Statevector {
    /// `|0…0⟩`.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_width(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::DimensionMismatch { expected: dim, got: index });
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    /// `|+…+⟩`.
    pub fn uniform(n_qubits: usize) -> Result<Self> {
        check_width(n_qubits)?;
        let dim = 1usize << n_qubits;
        let a = C64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Ok(Self { n_qubits, amps: vec![a; dim] })
    }

    /// Wraps raw amplitudes, normalizing them.
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let dim = amps.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::DimensionMismatch { expected: dim.next_power_of_two().max(2), got: dim });
        }
        let n_qubits = dim.trailing_zeros() as usize;
        check_width(n_qubits)?;
        let mut sv = Self { n_qubits, amps };
        let norm = sv.norm_sqr().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::DegenerateNormalization(norm));
        }
        sv.amps.iter_mut().for_each(|a| *a /= norm);
        Ok(sv)
    }

    /// Wraps amplitudes of a valid length without normalizing (for derivative states).
    pub(crate) fn from_raw(amps: Vec<C64>) -> Self {
        let n_qubits = amps.len().trailing_zeros() as usize;
        Self { n_qubits, amps }
    }

    /// Haar-random state.
    pub fn random(n_qubits: usize, rng: &mut Rng) -> Result<Self> {
        check_width(n_qubits)?;
        let amps = (0..1usize << n_qubits)
            .map(|_| {
                let re: f64 = rng.sample(rand_distr::StandardNormal);
                let im: f64 = rng.sample(rand_distr::StandardNormal);
                C64::new(re, im)
            })
            .collect();
        Self::from_amplitudes(amps)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn inner(&self, other: &Statevector) -> C64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// Applies `gate` in place.
    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        self.apply_unchecked(gate);
        Ok(())
    }

    pub fn apply_all<'a>(&mut self, gates: impl IntoIterator<Item = &'a Gate>) -> Result<()> {
        for g in gates {
            self.apply(g)?;
        }
        Ok(())
    }

    pub(crate) fn apply_unchecked(&mut self, gate: &Gate) {
        let n = self.n_qubits;
        let t = &gate.targets;
        match gate.kind {
            GateKind::Z => self.apply_phase(qubit_mask(n, t[0]), C64::new(-1.0, 0.0)),
            GateKind::S => self.apply_phase(qubit_mask(n, t[0]), C64::new(0.0, 1.0)),
            GateKind::Sdg => self.apply_phase(qubit_mask(n, t[0]), C64::new(0.0, -1.0)),
            GateKind::Rz => {
                let h = gate.angle.unwrap_or(0.0) / 2.0;
                let (lo, hi) = (C64::from_polar(1.0, -h), C64::from_polar(1.0, h));
                let m = qubit_mask(n, t[0]);
                for (s, a) in self.amps.iter_mut().enumerate() {
                    *a *= if s & m == 0 { lo } else { hi };
                }
            }
            GateKind::Rzz => {
                let h = gate.angle.unwrap_or(0.0) / 2.0;
                let (same, diff) = (C64::from_polar(1.0, -h), C64::from_polar(1.0, h));
                let (ma, mb) = (qubit_mask(n, t[0]), qubit_mask(n, t[1]));
                for (s, a) in self.amps.iter_mut().enumerate() {
                    *a *= if (s & ma == 0) == (s & mb == 0) { same } else { diff };
                }
            }
            GateKind::Cz => {
                let m = qubit_mask(n, t[0]) | qubit_mask(n, t[1]);
                for (s, a) in self.amps.iter_mut().enumerate() {
                    if s & m == m {
                        *a = -*a;
                    }
                }
            }
            GateKind::Cnot => {
                let (mc, mt) = (qubit_mask(n, t[0]), qubit_mask(n, t[1]));
                for s in 0..self.amps.len() {
                    if s & mc != 0 && s & mt == 0 {
                        self.amps.swap(s, s | mt);
                    }
                }
            }
            GateKind::X => {
                let m = qubit_mask(n, t[0]);
                for s in 0..self.amps.len() {
                    if s & m == 0 {
                        self.amps.swap(s, s | m);
                    }
                }
            }
            _ => {
                let u = gate.matrix_1q().expect("single-qubit kind");
                let m = qubit_mask(n, t[0]);
                for s in 0..self.amps.len() {
                    if s & m == 0 {
                        let (a, b) = (self.amps[s], self.amps[s | m]);
                        self.amps[s] = u[0][0] * a + u[0][1] * b;
                        self.amps[s | m] = u[1][0] * a + u[1][1] * b;
                    }
                }
            }
        }
    }

    fn apply_phase(&mut self, mask: usize, phase: C64) {
        for (s, a) in self.amps.iter_mut().enumerate() {
            if s & mask != 0 {
                *a *= phase;
            }
        }
    }

    /// Applies a Pauli string (including its phase) in place.
    pub fn apply_pauli(&mut self, p: &PauliString) -> Result<()> {
        if p.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits, got: p.n_qubits() });
        }
        let mut out = vec![C64::new(0.0, 0.0); self.amps.len()];
        for (s, &a) in self.amps.iter().enumerate() {
            let (t, c) = p.apply_to_basis(s);
            out[t] += c * a;
        }
        self.amps = out;
        Ok(())
    }

    /// `⟨ψ|P|ψ⟩`; real for Hermitian `P`.
    pub fn pauli_expectation(&self, p: &PauliString) -> Result<f64> {
        Ok(self.pauli_expectation_complex(p)?.re)
    }

    pub fn pauli_expectation_complex(&self, p: &PauliString) -> Result<C64> {
        if p.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits, got: p.n_qubits() });
        }
        Ok(self
            .amps
            .iter()
            .enumerate()
            .map(|(s, &a)| {
                let (t, c) = p.apply_to_basis(s);
                self.amps[t].conj() * c * a
            })
            .sum())
    }

    /// `n_s` i.i.d. basis indices drawn from `|⟨s|ψ⟩|²`.
    pub fn sample(&self, n_s: usize, rng: &mut Rng) -> Vec<usize> {
        let cdf = cumulative(&self.amps);
        (0..n_s).map(|_| draw(&cdf, rng)).collect()
    }
}

fn check_width(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        Err(Error::UnsupportedWidth(n_qubits))
    } else {
        Ok(())
    }
}

pub(crate) fn cumulative(amps: &[C64]) -> Vec<f64> {
    let mut acc = 0.0;
    let mut cdf: Vec<f64> = amps
        .iter()
        .map(|a| {
            acc += a.norm_sqr();
            acc
        })
        .collect();
    let total = acc;
    cdf.iter_mut().for_each(|c| *c /= total);
    cdf
}

pub(crate) fn draw(cdf: &[f64], rng: &mut Rng) -> usize {
    let u: f64 = rng.random();
    let idx = cdf.partition_point(|&c| c <= u);
    // guard against u landing past a rounded final entry
    idx.min(cdf.len() - 1)
}

/// Functional form of [`Statevector::apply`].
pub fn apply_gate(state: &Statevector, gate: &Gate) -> Result<Statevector> {
    let mut out = state.clone();
    out.apply(gate)?;
    Ok(out)
}

/// `⟨ψ|P|ψ⟩`.
pub fn pauli_expectation(state: &Statevector, p: &PauliString) -> Result<f64> {
    state.pauli_expectation(p)
}

/// `n_s` bitstrings sampled with a fresh generator seeded by `seed`.
pub fn sample_bitstrings(state: &Statevector, n_s: usize, seed: u64) -> Result<Vec<usize>> {
    if n_s == 0 {
        return Err(Error::TooFewSamples { got: 0, min: 1 });
    }
    let mut rng = crate::rng::substream(seed, crate::rng::Stream::Sampling);
    Ok(state.sample(n_s, &mut rng))
}
