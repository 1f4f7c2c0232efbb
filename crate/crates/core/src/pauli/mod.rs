//! Pauli-string algebra, benchmark Hamiltonians, ground-state oracles and the
//! MaxCut correlation encoding.
//!
//! A [`PauliString`] stores its operators as two bit masks using the same bit
//! layout as statevector indices (qubit 0 = most significant bit): the
//! flip mask marks X/Y positions, the z mask marks Z/Y positions.

mod hamiltonian;
mod maxcut;
mod models;
mod spectrum;

pub use hamiltonian::{Hamiltonian, Term};
pub use maxcut::{
    brute_force_maxcut, cut_value, erdos_renyi, read_edge_list, write_edge_list, Graph, MaxCutEncoding,
    DEFAULT_ALPHA,
};
pub use models::{build_heisenberg_2d, build_ising_1d, build_j1j2_1d, build_tfim_1d, ModelSpec};
pub use spectrum::{ground_state, ground_state_dense, ground_state_lanczos, DENSE_MAX_QUBITS};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result, C64};

/// Single-qubit Pauli symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }
}

/// `i^phase · σ_{0} ⊗ … ⊗ σ_{n−1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n_qubits: usize,
    x: u64,
    z: u64,
    /// Power of `i`, in `0..4`.
    phase: u8,
}

#[inline]
fn popcount(v: u64) -> u32 {
    v.count_ones()
}

impl PauliString {
    pub const MAX_QUBITS: usize = 64;

    pub fn identity(n_qubits: usize) -> Self {
        Self { n_qubits, x: 0, z: 0, phase: 0 }
    }

    /// Builds from raw masks; bits above `n_qubits` are rejected.
    pub fn from_masks(n_qubits: usize, x: u64, z: u64) -> Result<Self> {
        if n_qubits == 0 || n_qubits > Self::MAX_QUBITS {
            return Err(Error::InvalidPauli(format!("unsupported width {n_qubits}")));
        }
        let full = if n_qubits == 64 { u64::MAX } else { (1u64 << n_qubits) - 1 };
        if (x | z) & !full != 0 {
            return Err(Error::InvalidPauli("mask exceeds register width".into()));
        }
        Ok(Self { n_qubits, x, z, phase: 0 })
    }

    pub fn from_ops(ops: &[Pauli]) -> Result<Self> {
        let mut p = Self::from_masks(ops.len(), 0, 0)?;
        for (q, op) in ops.iter().enumerate() {
            p = p.with_op(q, *op);
        }
        Ok(p)
    }

    /// `op` on qubit `q`, identity elsewhere.
    pub fn single(n_qubits: usize, q: usize, op: Pauli) -> Result<Self> {
        if q >= n_qubits {
            return Err(Error::QubitOutOfRange { index: q, n_qubits });
        }
        Ok(Self::from_masks(n_qubits, 0, 0)?.with_op(q, op))
    }

    /// `op` on every qubit of `qubits`, identity elsewhere.
    pub fn on_qubits(n_qubits: usize, qubits: &[usize], op: Pauli) -> Result<Self> {
        let mut p = Self::from_masks(n_qubits, 0, 0)?;
        for &q in qubits {
            if q >= n_qubits {
                return Err(Error::QubitOutOfRange { index: q, n_qubits });
            }
            p = p.with_op(q, op);
        }
        Ok(p)
    }

    fn bit(&self, q: usize) -> u64 {
        1u64 << (self.n_qubits - 1 - q)
    }

    fn with_op(mut self, q: usize, op: Pauli) -> Self {
        let b = self.bit(q);
        let (xb, zb) = op.bits();
        self.x = if xb { self.x | b } else { self.x & !b };
        self.z = if zb { self.z | b } else { self.z & !b };
        self
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Positions carrying X or Y, as a basis-index mask.
    pub fn flip_mask(&self) -> u64 {
        self.x
    }

    /// Positions carrying Z or Y, as a basis-index mask.
    pub fn z_mask(&self) -> u64 {
        self.z
    }

    /// Phase as a power of `i`.
    pub fn phase_power(&self) -> u8 {
        self.phase
    }

    pub fn phase(&self) -> C64 {
        i_pow(self.phase as u32)
    }

    pub fn with_phase_power(mut self, k: u8) -> Self {
        self.phase = k % 4;
        self
    }

    /// Same operators, phase `+1`.
    pub fn without_phase(self) -> Self {
        self.with_phase_power(0)
    }

    pub fn op(&self, q: usize) -> Pauli {
        let b = self.bit(q);
        match (self.x & b != 0, self.z & b != 0) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn ops(&self) -> Vec<Pauli> {
        (0..self.n_qubits).map(|q| self.op(q)).collect()
    }

    /// Qubits carrying a non-identity operator, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n_qubits).filter(|&q| self.op(q) != Pauli::I).collect()
    }

    pub fn weight(&self) -> usize {
        popcount(self.x | self.z) as usize
    }

    pub fn y_count(&self) -> u32 {
        popcount(self.x & self.z)
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn is_diagonal(&self) -> bool {
        self.x == 0
    }

    /// Hermitian iff the phase is real.
    pub fn is_hermitian(&self) -> bool {
        self.phase % 2 == 0
    }

    /// Operator product `self · other`.
    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        self.check_width(other)?;
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        let k = popcount(self.x & self.z) + popcount(other.x & other.z) + 2 * popcount(self.z & other.x)
            + 4 * 64
            - popcount(x & z);
        let phase = ((k + self.phase as u32 + other.phase as u32) % 4) as u8;
        Ok(PauliString { n_qubits: self.n_qubits, x, z, phase })
    }

    pub fn commutes_with(&self, other: &PauliString) -> Result<bool> {
        self.check_width(other)?;
        Ok((popcount(self.x & other.z) + popcount(self.z & other.x)) % 2 == 0)
    }

    fn check_width(&self, other: &PauliString) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits, got: other.n_qubits });
        }
        Ok(())
    }

    /// `P|s⟩ = c |t⟩`; returns `(t, c)`.
    #[inline]
    pub fn apply_to_basis(&self, s: usize) -> (usize, C64) {
        let sign = popcount(s as u64 & self.z) % 2 * 2;
        let k = self.phase as u32 + self.y_count() + sign;
        (s ^ self.x as usize, i_pow(k))
    }

    /// Real sign `(−1)^{popcount(s & z)}`, the eigenvalue of a diagonal string.
    #[inline]
    pub fn z_sign(&self, s: usize) -> f64 {
        if popcount(s as u64 & self.z) % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Operator word without phase, e.g. `"XZIIY"`.
    pub fn word(&self) -> String {
        self.ops().into_iter().map(Pauli::to_char).collect()
    }
}

/// `i^k`.
#[inline]
pub fn i_pow(k: u32) -> C64 {
    match k % 4 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = ["", "i", "-", "-i"][self.phase as usize];
        write!(f, "{prefix}{}", self.word())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Parses `"XZIIY"` with an optional phase prefix `+`, `-`, `i`, `-i`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (phase, word) = if let Some(rest) = s.strip_prefix("-i") {
            (3, rest)
        } else if let Some(rest) = s.strip_prefix('-') {
            (2, rest)
        } else if let Some(rest) = s.strip_prefix('+') {
            (0, rest)
        } else if let Some(rest) = s.strip_prefix('i') {
            (1, rest)
        } else {
            (0, s)
        };
        let ops = word
            .chars()
            .map(|c| Pauli::from_char(c).ok_or_else(|| Error::InvalidPauli(format!("bad symbol `{c}` in `{s}`"))))
            .collect::<Result<Vec<_>>>()?;
        if ops.is_empty() {
            return Err(Error::InvalidPauli("empty Pauli word".into()));
        }
        Ok(Self::from_ops(&ops)?.with_phase_power(phase))
    }
}

impl Serialize for PauliString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}
