use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::PauliString;
use crate::qsim::Statevector;
use crate::{Error, Result, C64};

/// One weighted Pauli term. Stored strings always carry phase `+1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: f64,
    pub pauli: PauliString,
}

/// `H = Σ_i c_i P_i` with real `c_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Term>", into = "Vec<Term>")]
pub struct Hamiltonian {
    n_qubits: usize,
    terms: Vec<Term>,
}

impl TryFrom<Vec<Term>> for Hamiltonian {
    type Error = Error;

    fn try_from(terms: Vec<Term>) -> Result<Self> {
        let n = terms.first().map(|t| t.pauli.n_qubits()).ok_or_else(|| {
            Error::InvalidModel("a serialized Hamiltonian needs at least one term".into())
        })?;
        let mut h = Hamiltonian::new(n);
        for t in terms {
            h.add_term(t.coeff, t.pauli)?;
        }
        Ok(h)
    }
}

impl From<Hamiltonian> for Vec<Term> {
    fn from(h: Hamiltonian) -> Self {
        h.terms
    }
}

impl Hamiltonian {
    pub fn new(n_qubits: usize) -> Self {
        Self { n_qubits, terms: Vec::new() }
    }

    /// Appends `coeff · pauli`, folding a `±1` phase into the coefficient.
    pub fn add_term(&mut self, coeff: f64, pauli: PauliString) -> Result<()> {
        if pauli.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits, got: pauli.n_qubits() });
        }
        if !coeff.is_finite() {
            return Err(Error::InvalidModel(format!("non-finite coefficient {coeff}")));
        }
        if !pauli.is_hermitian() {
            return Err(Error::NonHermitian(pauli.to_string()));
        }
        let sign = if pauli.phase_power() == 2 { -1.0 } else { 1.0 };
        self.terms.push(Term { coeff: sign * coeff, pauli: pauli.without_phase() });
        Ok(())
    }

    /// Convenience for builders: parses `word` and appends it.
    pub fn add(&mut self, coeff: f64, word: &str) -> Result<()> {
        self.add_term(coeff, word.parse()?)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Number of Pauli terms, `m_H`.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_diagonal(&self) -> bool {
        self.terms.iter().all(|t| t.pauli.is_diagonal())
    }

    /// True when the matrix is real in the computational basis (even Y count per term).
    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|t| t.pauli.y_count() % 2 == 0)
    }

    /// Qubit pairs coupled by some two-body term, sorted and deduplicated.
    pub fn interaction_edges(&self) -> Vec<(usize, usize)> {
        let set: BTreeSet<(usize, usize)> = self
            .terms
            .iter()
            .filter_map(|t| match t.pauli.support()[..] {
                [a, b] => Some((a, b)),
                _ => None,
            })
            .collect();
        set.into_iter().collect()
    }

    /// `H v` for a raw amplitude vector of length `2^n`.
    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        let dim = 1usize << self.n_qubits;
        if v.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: v.len() });
        }
        let mut out = vec![C64::new(0.0, 0.0); dim];
        self.apply_into(v, &mut out);
        Ok(out)
    }

    pub(crate) fn apply_into(&self, v: &[C64], out: &mut [C64]) {
        out.iter_mut().for_each(|o| *o = C64::new(0.0, 0.0));
        for term in &self.terms {
            for (s, &a) in v.iter().enumerate() {
                let (t, c) = term.pauli.apply_to_basis(s);
                out[t] += c * a * term.coeff;
            }
        }
    }

    /// Diagonal matrix elements `⟨s|H|s⟩`.
    pub fn diagonal(&self) -> Vec<f64> {
        let dim = 1usize << self.n_qubits;
        let mut d = vec![0.0; dim];
        for term in self.terms.iter().filter(|t| t.pauli.is_diagonal()) {
            for (s, ds) in d.iter_mut().enumerate() {
                *ds += term.coeff * term.pauli.z_sign(s);
            }
        }
        d
    }

    /// `⟨ψ|H|ψ⟩` for a normalized state.
    pub fn expectation(&self, state: &Statevector) -> Result<f64> {
        let hv = self.apply(state.amplitudes())?;
        Ok(state.amplitudes().iter().zip(&hv).map(|(a, b)| (a.conj() * b).re).sum())
    }

    /// Dense `2^n × 2^n` matrix, built from the basis action of each term.
    pub fn to_dense(&self) -> nalgebra::DMatrix<C64> {
        let dim = 1usize << self.n_qubits;
        let mut m = nalgebra::DMatrix::zeros(dim, dim);
        for term in &self.terms {
            for s in 0..dim {
                let (t, c) = term.pauli.apply_to_basis(s);
                m[(t, s)] += c * term.coeff;
            }
        }
        m
    }
}
