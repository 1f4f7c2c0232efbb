use super::Circuit;
use crate::pauli::Hamiltonian;
use crate::qsim::GateKind;
use crate::{Error, Result};

/// Hardware-efficient ansatz on `|0…0⟩`.
///
/// `reps` blocks of (Ry layer, Rz layer, CNOT chain `(q, q+1)`), followed by
/// one more Ry and Rz layer, for `2n(reps + 1)` parameters. `reps = 0` is a
/// single Ry + Rz layer.
pub fn build_hea(n: usize, reps: usize) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::InvalidAnsatz("HEA needs at least one qubit".into()));
    }
    let mut c = Circuit::new(n);
    for r in 0..=reps {
        for q in 0..n {
            c.push_param(GateKind::Ry, &[q], &format!("hea{r}_ry{q}"), 1.0);
        }
        for q in 0..n {
            c.push_param(GateKind::Rz, &[q], &format!("hea{r}_rz{q}"), 1.0);
        }
        if r < reps {
            for q in 0..n.saturating_sub(1) {
                c.push(GateKind::Cnot, &[q, q + 1]);
            }
        }
    }
    Ok(c)
}

/// QAOA with one shared `γ_l` and `β_l` per layer:
/// `H^{⊗n}`, then `exp(−iγ_l H_C) exp(−iβ_l Σ X)` for `l = 1..p`.
///
/// The cost must be diagonal with terms of weight at most two; a term
/// `c Z_a Z_b` becomes `Rzz(2cγ)` and `c Z_a` becomes `Rz(2cγ)`.
pub fn build_qaoa(h: &Hamiltonian, p_layers: usize) -> Result<Circuit> {
    if p_layers == 0 {
        return Err(Error::InvalidAnsatz("QAOA needs p >= 1".into()));
    }
    for t in h.terms() {
        if !t.pauli.is_diagonal() {
            return Err(Error::InvalidAnsatz(format!("QAOA cost term {} is not diagonal", t.pauli)));
        }
        if t.pauli.weight() > 2 {
            return Err(Error::InvalidAnsatz(format!("QAOA cost term {} has weight > 2", t.pauli)));
        }
    }
    let n = h.n_qubits();
    let mut c = Circuit::new(n);
    for q in 0..n {
        c.push(GateKind::H, &[q]);
    }
    for l in 1..=p_layers {
        let gamma = format!("gamma{l}");
        let beta = format!("beta{l}");
        // register both names even for an all-identity cost
        c.params.entry(gamma.clone()).or_insert(0.0);
        c.params.entry(beta.clone()).or_insert(0.0);
        for t in h.terms() {
            match t.pauli.support()[..] {
                [] => {}
                [a] => {
                    c.push_param(GateKind::Rz, &[a], &gamma, 2.0 * t.coeff);
                }
                [a, b] => {
                    c.push_param(GateKind::Rzz, &[a, b], &gamma, 2.0 * t.coeff);
                }
                _ => unreachable!("weight checked above"),
            }
        }
        for q in 0..n {
            c.push_param(GateKind::Rx, &[q], &beta, 2.0);
        }
    }
    Ok(c)
}

/// Brickwork baseline: `depth` layers of (Ry on every qubit, CZ on adjacent
/// pairs), the pairs starting at qubit 0 in odd layers and qubit 1 in even ones.
pub fn build_brickwork(n: usize, depth: usize) -> Result<Circuit> {
    if depth == 0 || n == 0 {
        return Err(Error::InvalidAnsatz("brickwork needs depth >= 1 and n >= 1".into()));
    }
    let mut c = Circuit::new(n);
    for d in 1..=depth {
        for q in 0..n {
            c.push_param(GateKind::Ry, &[q], &format!("bw{d}_ry{q}"), 1.0);
        }
        let start = if d % 2 == 1 { 0 } else { 1 };
        let mut q = start;
        while q + 1 < n {
            c.push(GateKind::Cz, &[q, q + 1]);
            q += 2;
        }
    }
    Ok(c)
}

/// `⌈√m⌉` for `m` encoded variables (at least 1).
pub fn default_brickwork_depth(m: usize) -> usize {
    let mut d = (m as f64).sqrt().ceil() as usize;
    // guard against floating error on perfect squares
    while d > 1 && (d - 1) * (d - 1) >= m {
        d -= 1;
    }
    while d * d < m {
        d += 1;
    }
    d.max(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{build_ising_1d, build_tfim_1d};

    #[test]
    fn hea_counts() {
        let c = build_hea(3, 1).unwrap();
        assert_eq!(c.n_params(), 12);
        assert_eq!(c.count_gates(GateKind::Cnot), 2);
        assert_eq!(build_hea(6, 2).unwrap().n_params(), 36);
        let flat = build_hea(4, 0).unwrap();
        assert_eq!(flat.n_params(), 8);
        assert_eq!(flat.count_gates(GateKind::Cnot), 0);
    }

    #[test]
    fn qaoa_counts_and_rejection() {
        let h = build_ising_1d(4, 1.0, 0.5).unwrap();
        assert_eq!(build_qaoa(&h, 5).unwrap().n_params(), 10);
        assert!(build_qaoa(&build_tfim_1d(3, 1.0, 1.0).unwrap(), 1).is_err());
    }

    #[test]
    fn brickwork_pattern() {
        let c = build_brickwork(4, 2).unwrap();
        assert_eq!(c.n_params(), 8);
        let cz: Vec<Vec<usize>> = c.gates.iter().filter(|g| g.kind == GateKind::Cz).map(|g| g.targets.clone()).collect();
        assert_eq!(cz, vec![vec![0, 1], vec![2, 3], vec![1, 2]]);
        assert_eq!(default_brickwork_depth(45), 7);
        assert_eq!(default_brickwork_depth(9), 3);
        assert_eq!(default_brickwork_depth(1), 1);
        let single = build_brickwork(3, 1).unwrap();
        assert_eq!(single.count_gates(GateKind::Ry), 3);
        assert_eq!(single.count_gates(GateKind::Cz), 1);
    }
}
