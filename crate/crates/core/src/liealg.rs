//! Dynamical Lie algebra dimensions by nested-commutator closure.
//!
//! Elements are real combinations `Σ_k c_k · iP_k` of anti-Hermitian Pauli
//! strings, stored sparsely by operator masks. Linear independence is decided
//! by incremental Gaussian elimination over those coefficient vectors.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::pauli::{Pauli, PauliString};
use crate::{Error, Result};

/// Pivot tolerance for the independence test.
pub const PIVOT_TOL: f64 = 1e-9;

/// `Σ c_k · i P_k` keyed by the `(x, z)` masks of `P_k`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LieElement {
    pub n_qubits: usize,
    terms: BTreeMap<(u64, u64), f64>,
}

impl LieElement {
    pub fn zero(n_qubits: usize) -> Self {
        Self { n_qubits, terms: BTreeMap::new() }
    }

    /// `i · P` for a phase-free Hermitian string.
    pub fn from_pauli(p: &PauliString) -> Self {
        Self::from_terms(p.n_qubits(), &[(1.0, *p)])
    }

    /// `Σ c_k · i P_k`; the Pauli phases must be `±1`.
    pub fn from_terms(n_qubits: usize, terms: &[(f64, PauliString)]) -> Self {
        let mut e = Self::zero(n_qubits);
        for (c, p) in terms {
            let sign = if p.phase_power() == 2 { -1.0 } else { 1.0 };
            e.add(p.flip_mask(), p.z_mask(), sign * c);
        }
        e
    }

    fn add(&mut self, x: u64, z: u64, c: f64) {
        let entry = self.terms.entry((x, z)).or_insert(0.0);
        *entry += c;
        if entry.abs() < 1e-14 {
            self.terms.remove(&(x, z));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lie bracket `[A, B] = AB − BA`.
    pub fn commutator(&self, other: &LieElement) -> LieElement {
        let mut out = LieElement::zero(self.n_qubits);
        for (&(x1, z1), &a) in &self.terms {
            for (&(x2, z2), &b) in &other.terms {
                let anti = ((x1 & z2).count_ones() + (z1 & x2).count_ones()) % 2 == 1;
                if !anti {
                    continue;
                }
                // (iP)(iQ) − (iQ)(iP) = −2 PQ = −2 i^k R; k is odd, so
                // −2 i^k R = (−2 i^{k−1}) · iR with a real prefactor.
                let k = (x1 & z1).count_ones() + (x2 & z2).count_ones() + 2 * (z1 & x2).count_ones() + 256
                    - ((x1 ^ x2) & (z1 ^ z2)).count_ones();
                let real = if (k - 1) % 4 == 0 { 1.0 } else { -1.0 };
                out.add(x1 ^ x2, z1 ^ z2, -2.0 * real * a * b);
            }
        }
        out
    }

    fn max_abs(&self) -> Option<((u64, u64), f64)> {
        self.terms
            .iter()
            .map(|(&k, &v)| (k, v))
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
    }

    fn axpy(&mut self, alpha: f64, other: &LieElement) {
        for (&(x, z), &v) in &other.terms {
            self.add(x, z, alpha * v);
        }
    }
}

/// Incrementally built basis of a real span.
#[derive(Debug, Clone, Default)]
pub struct AlgebraBasis {
    /// Reduced vectors with their pivot keys, in insertion order.
    reduced: Vec<((u64, u64), LieElement)>,
    /// Elements as inserted (before reduction), used for further brackets.
    pub elements: Vec<LieElement>,
}

impl AlgebraBasis {
    pub fn dimension(&self) -> usize {
        self.reduced.len()
    }

    /// Inserts `e` if it is independent of the current span; returns whether it was.
    pub fn insert(&mut self, e: &LieElement) -> bool {
        let mut v = e.clone();
        for (pivot, b) in &self.reduced {
            if let Some(&c) = v.terms.get(pivot) {
                v.axpy(-c / b.terms[pivot], b);
            }
        }
        match v.max_abs() {
            Some((key, c)) if c.abs() > PIVOT_TOL => {
                let scale = 1.0 / c;
                v.terms.values_mut().for_each(|t| *t *= scale);
                v.terms.retain(|_, t| t.abs() > 1e-14);
                self.reduced.push((key, v));
                self.elements.push(e.clone());
                true
            }
            _ => false,
        }
    }
}

/// Dimension of the real Lie algebra generated by `generators`.
pub fn closure_dimension(generators: &[LieElement], n_qubits: usize) -> Result<usize> {
    Ok(closure(generators, n_qubits)?.dimension())
}

/// The full closure basis.
pub fn closure(generators: &[LieElement], n_qubits: usize) -> Result<AlgebraBasis> {
    if n_qubits == 0 || n_qubits > 5 {
        return Err(Error::InvalidModel(format!("closure supported for 1..=5 qubits, got {n_qubits}")));
    }
    if let Some(g) = generators.iter().find(|g| g.n_qubits != n_qubits) {
        return Err(Error::DimensionMismatch { expected: n_qubits, got: g.n_qubits });
    }
    let mut basis = AlgebraBasis::default();
    for g in generators {
        basis.insert(g);
    }
    // every pair (i, j) with j < i is bracketed exactly once
    let mut next = 0;
    while next < basis.elements.len() {
        let a = basis.elements[next].clone();
        for j in 0..next {
            let c = a.commutator(&basis.elements[j]);
            if !c.is_zero() {
                basis.insert(&c);
            }
        }
        next += 1;
    }
    Ok(basis)
}

fn z_subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize == size {
            out.push((0..n).filter(|q| mask >> q & 1 == 1).collect());
        }
    }
    out
}

fn check_nm(n: usize, m: usize) -> Result<()> {
    if !(2..=5).contains(&n) || !(2..=n).contains(&m) {
        return Err(Error::InvalidModel(format!("need 2 <= m <= n <= 5, got n={n}, m={m}")));
    }
    Ok(())
}

/// `{Z_D : |D| = 2j, j = 1..⌊m/2⌋} ∪ {Y_i}`: each Z string is its own generator.
pub fn generators_individual(n: usize, m: usize) -> Result<Vec<LieElement>> {
    check_nm(n, m)?;
    let mut gens = Vec::new();
    for j in 1..=m / 2 {
        for d in z_subsets(n, 2 * j) {
            gens.push(LieElement::from_pauli(&PauliString::on_qubits(n, &d, Pauli::Z)?));
        }
    }
    for i in 0..n {
        gens.push(LieElement::from_pauli(&PauliString::single(n, i, Pauli::Y)?));
    }
    Ok(gens)
}

/// `{Σ_{|D| = 2j} Z_D : j = 1..⌊m/2⌋} ∪ {Σ_i X_i}`: shared-parameter generators.
pub fn generators_summed(n: usize, m: usize) -> Result<Vec<LieElement>> {
    check_nm(n, m)?;
    let mut gens = Vec::new();
    for j in 1..=m / 2 {
        let terms = z_subsets(n, 2 * j)
            .into_iter()
            .map(|d| Ok((1.0, PauliString::on_qubits(n, &d, Pauli::Z)?)))
            .collect::<Result<Vec<_>>>()?;
        gens.push(LieElement::from_terms(n, &terms));
    }
    let xs = (0..n).map(|i| Ok((1.0, PauliString::single(n, i, Pauli::X)?))).collect::<Result<Vec<_>>>()?;
    gens.push(LieElement::from_terms(n, &xs));
    Ok(gens)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GeneratorComparison {
    pub n: usize,
    pub m: usize,
    pub dim_g1: usize,
    pub dim_g2: usize,
    pub g2_smaller: bool,
}

/// Closure dimensions of both generator families.
pub fn compare_generator_sets(n: usize, m: usize) -> Result<GeneratorComparison> {
    let dim_g1 = closure_dimension(&generators_individual(n, m)?, n)?;
    let dim_g2 = closure_dimension(&generators_summed(n, m)?, n)?;
    Ok(GeneratorComparison { n, m, dim_g1, dim_g2, g2_smaller: dim_g2 < dim_g1 })
}
