//! Builders for the benchmark spin models. All chains and grids use open
//! boundaries.

use serde::{Deserialize, Serialize};

use super::{Hamiltonian, Pauli, PauliString};
use crate::qsim::MAX_QUBITS;
use crate::{Error, Result};

fn two_body(n: usize, a: usize, b: usize, op: Pauli) -> Result<PauliString> {
    PauliString::on_qubits(n, &[a, b], op)
}

fn check_finite(values: &[f64]) -> Result<()> {
    match values.iter().find(|v| !v.is_finite()) {
        Some(v) => Err(Error::InvalidModel(format!("non-finite model parameter {v}"))),
        None => Ok(()),
    }
}

fn add_heisenberg_bond(h: &mut Hamiltonian, a: usize, b: usize, j: f64, delta: f64) -> Result<()> {
    let n = h.n_qubits();
    h.add_term(j, two_body(n, a, b, Pauli::X)?)?;
    h.add_term(j, two_body(n, a, b, Pauli::Y)?)?;
    h.add_term(j * delta, two_body(n, a, b, Pauli::Z)?)
}

/// Anisotropic J1–J2 chain:
/// `J1 Σ_{i} (XX + YY + Δ1 ZZ)_{i,i+1} + J2 Σ_{i} (XX + YY + Δ2 ZZ)_{i,i+2} + B_H Σ_i Z_i`.
///
/// Bonds are emitted nearest-neighbour first; the field terms are omitted when
/// `b_h == 0`.
pub fn build_j1j2_1d(n: usize, j1: f64, j2: f64, delta1: f64, delta2: f64, b_h: f64) -> Result<Hamiltonian> {
    if !(3..=MAX_QUBITS).contains(&n) {
        return Err(Error::InvalidModel(format!("J1-J2 chain needs 3..={MAX_QUBITS} sites, got {n}")));
    }
    check_finite(&[j1, j2, delta1, delta2, b_h])?;
    let mut h = Hamiltonian::new(n);
    for i in 0..n - 1 {
        add_heisenberg_bond(&mut h, i, i + 1, j1, delta1)?;
    }
    for i in 0..n - 2 {
        add_heisenberg_bond(&mut h, i, i + 2, j2, delta2)?;
    }
    if b_h != 0.0 {
        for i in 0..n {
            h.add_term(b_h, PauliString::single(n, i, Pauli::Z)?)?;
        }
    }
    Ok(h)
}

/// Open-boundary grid Heisenberg model `h Σ Z_i + J Σ_edges (XX + YY + ZZ)`.
///
/// Site `(r, c)` is qubit `r * cols + c`. Field terms are omitted when `h == 0`.
pub fn build_heisenberg_2d(rows: usize, cols: usize, h_field: f64, j: f64) -> Result<Hamiltonian> {
    let n = rows * cols;
    if rows == 0 || cols == 0 || n < 2 || n > MAX_QUBITS {
        return Err(Error::InvalidModel(format!("grid {rows}x{cols} outside 2..={MAX_QUBITS} sites")));
    }
    check_finite(&[h_field, j])?;
    let mut h = Hamiltonian::new(n);
    if h_field != 0.0 {
        for i in 0..n {
            h.add_term(h_field, PauliString::single(n, i, Pauli::Z)?)?;
        }
    }
    for (a, b) in grid_edges(rows, cols) {
        add_heisenberg_bond(&mut h, a, b, j, 1.0)?;
    }
    Ok(h)
}

fn grid_edges(rows: usize, cols: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let i = r * cols + c;
            if c + 1 < cols {
                edges.push((i, i + 1));
            }
            if r + 1 < rows {
                edges.push((i, i + cols));
            }
        }
    }
    edges
}

/// Transverse-field Ising chain `−J Σ Z_i Z_{i+1} − g Σ X_i`.
pub fn build_tfim_1d(n: usize, j: f64, g: f64) -> Result<Hamiltonian> {
    check_chain(n)?;
    check_finite(&[j, g])?;
    let mut h = Hamiltonian::new(n);
    for i in 0..n - 1 {
        h.add_term(-j, two_body(n, i, i + 1, Pauli::Z)?)?;
    }
    for i in 0..n {
        h.add_term(-g, PauliString::single(n, i, Pauli::X)?)?;
    }
    Ok(h)
}

/// Classical Ising chain `−J Σ Z_i Z_{i+1} − h Σ Z_i` (field omitted when `h == 0`).
pub fn build_ising_1d(n: usize, j: f64, h_field: f64) -> Result<Hamiltonian> {
    check_chain(n)?;
    check_finite(&[j, h_field])?;
    let mut h = Hamiltonian::new(n);
    for i in 0..n - 1 {
        h.add_term(-j, two_body(n, i, i + 1, Pauli::Z)?)?;
    }
    if h_field != 0.0 {
        for i in 0..n {
            h.add_term(-h_field, PauliString::single(n, i, Pauli::Z)?)?;
        }
    }
    Ok(h)
}

fn check_chain(n: usize) -> Result<()> {
    if (2..=MAX_QUBITS).contains(&n) {
        Ok(())
    } else {
        Err(Error::InvalidModel(format!("chain needs 2..={MAX_QUBITS} sites, got {n}")))
    }
}

fn one() -> f64 {
    1.0
}

/// Serializable model description used in run configurations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ModelSpec {
    J1j2 {
        n: usize,
        #[serde(default = "one")]
        j1: f64,
        j2: f64,
        #[serde(default = "one")]
        delta1: f64,
        #[serde(default = "one")]
        delta2: f64,
        #[serde(default)]
        b_h: f64,
    },
    Heisenberg2d {
        rows: usize,
        cols: usize,
        h: f64,
        j: f64,
    },
    Tfim1d {
        n: usize,
        j: f64,
        g: f64,
    },
    Ising1d {
        n: usize,
        j: f64,
        #[serde(default)]
        h: f64,
    },
    /// Explicit term list.
    Custom { terms: Hamiltonian },
}

impl ModelSpec {
    pub fn build(&self) -> Result<Hamiltonian> {
        match self {
            ModelSpec::J1j2 { n, j1, j2, delta1, delta2, b_h } => build_j1j2_1d(*n, *j1, *j2, *delta1, *delta2, *b_h),
            ModelSpec::Heisenberg2d { rows, cols, h, j } => build_heisenberg_2d(*rows, *cols, *h, *j),
            ModelSpec::Tfim1d { n, j, g } => build_tfim_1d(*n, *j, *g),
            ModelSpec::Ising1d { n, j, h } => build_ising_1d(*n, *j, *h),
            ModelSpec::Custom { terms } => Ok(terms.clone()),
        }
    }

    /// Short label for reports, e.g. `j1j2_n6`.
    pub fn label(&self) -> String {
        match self {
            ModelSpec::J1j2 { n, .. } => format!("j1j2_n{n}"),
            ModelSpec::Heisenberg2d { rows, cols, .. } => format!("heisenberg_{rows}x{cols}"),
            ModelSpec::Tfim1d { n, .. } => format!("tfim_n{n}"),
            ModelSpec::Ising1d { n, .. } => format!("ising_n{n}"),
            ModelSpec::Custom { terms } => format!("custom_n{}", terms.n_qubits()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn j1j2_term_counts() {
        let h = build_j1j2_1d(6, 1.0, 0.6, 1.0, 1.0, 0.0).unwrap();
        assert_eq!(h.len(), 27);
        assert_eq!(h.interaction_edges().len(), 9);
        assert_eq!(build_j1j2_1d(3, 1.0, 0.0, 1.0, 1.0, 0.0).unwrap().len(), 9);
        assert_eq!(build_j1j2_1d(6, 1.0, 0.6, 1.0, 1.0, 0.3).unwrap().len(), 33);
        assert!(build_j1j2_1d(2, 1.0, 0.6, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn heisenberg_grid_counts() {
        let h = build_heisenberg_2d(3, 3, 1.0, 0.4).unwrap();
        assert_eq!(h.len(), 45);
        let chain = build_heisenberg_2d(1, 3, 1.0, 1.0).unwrap();
        assert_eq!(chain.len(), 9);
        assert!(build_heisenberg_2d(4, 4, 1.0, 1.0).is_err());
    }

    #[test]
    fn ising_is_diagonal_and_tfim_is_not() {
        assert!(build_ising_1d(4, 1.0, 0.5).unwrap().is_diagonal());
        assert!(!build_tfim_1d(4, 1.0, 0.5).unwrap().is_diagonal());
        assert!(build_ising_1d(1, 1.0, 0.0).is_err());
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = ModelSpec::J1j2 { n: 6, j1: 1.0, j2: 0.6, delta1: 1.0, delta2: 1.0, b_h: 0.0 };
        let text = serde_json::to_string(&spec).unwrap();
        let back: ModelSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(spec, back);
        let short: ModelSpec = serde_json::from_str(r#"{"model":"j1j2","n":6,"j2":0.6}"#).unwrap();
        assert_eq!(short, spec);
    }
}
