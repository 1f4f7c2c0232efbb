//! Measurement plans for the hybrid estimator and cost accounting for the
//! circuit-only baselines.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::ansatz::{Angle, Circuit, SignAnsatz};
use crate::pauli::{Hamiltonian, Pauli, PauliString};
use crate::qsim::{Gate, GateKind};
use crate::{Error, Result};

/// Observable measured in one basis: `coeff · P` with a phase-free `P`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlannedTerm {
    pub coeff: f64,
    pub pauli: PauliString,
    pub basis: usize,
}

/// A shifted string `L = i Z_p P` contributing to the derivative of one
/// diagonal-gate parameter: `∂E/∂θ += coeff · ⟨F L F⟩ / ⟨F F⟩`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftedTerm {
    pub param: String,
    pub term: PlannedTerm,
}

/// One measured circuit: a suffix appended to the state preparation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementBasis {
    /// X/Y positions shared by all strings read from this circuit.
    pub flip_mask: u64,
    /// Number of Y operators modulo 4.
    pub y_class: u8,
    /// Qubit whose measured bit carries the pair interference (none for the
    /// computational basis).
    pub pivot: Option<usize>,
    pub suffix: Vec<Gate>,
    /// Human-readable strings read from this circuit.
    pub covered: Vec<String>,
}

/// Circuits needed for one iteration: the energy terms and every shifted
/// string of the optimized diagonal block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementPlan {
    pub n_qubits: usize,
    pub bases: Vec<MeasurementBasis>,
    pub energy_terms: Vec<PlannedTerm>,
    pub shifted_terms: Vec<ShiftedTerm>,
    pub circuit_count: usize,
}

fn gadget_suffix(n: usize, flip_mask: u64, y_class: u8) -> (usize, Vec<Gate>) {
    let flips: Vec<usize> = (0..n).filter(|&q| flip_mask >> (n - 1 - q) & 1 == 1).collect();
    let pivot = flips[0];
    let mut gates: Vec<Gate> = flips[1..].iter().map(|&q| Gate::cnot(pivot, q)).collect();
    // diag(1, (−i)^{y_class}) on the pivot
    match y_class % 4 {
        1 => gates.push(Gate::fixed(GateKind::Sdg, pivot)),
        2 => gates.push(Gate::fixed(GateKind::Z, pivot)),
        3 => gates.push(Gate::fixed(GateKind::S, pivot)),
        _ => {}
    }
    gates.push(Gate::h(pivot));
    (pivot, gates)
}

struct PlanBuilder {
    n: usize,
    keys: IndexMap<(u64, u8), usize>,
    bases: Vec<MeasurementBasis>,
}

impl PlanBuilder {
    fn new(n: usize) -> Self {
        let mut b = Self { n, keys: IndexMap::new(), bases: Vec::new() };
        b.basis_for(0, 0);
        b
    }

    fn basis_for(&mut self, flip_mask: u64, y_class: u8) -> usize {
        // every diagonal string shares the computational basis
        let key = if flip_mask == 0 { (0, 0) } else { (flip_mask, y_class % 4) };
        if let Some(&i) = self.keys.get(&key) {
            return i;
        }
        let (pivot, suffix) = if key.0 == 0 {
            (None, Vec::new())
        } else {
            let (p, s) = gadget_suffix(self.n, key.0, key.1);
            (Some(p), s)
        };
        self.bases.push(MeasurementBasis { flip_mask: key.0, y_class: key.1, pivot, suffix, covered: Vec::new() });
        self.keys.insert(key, self.bases.len() - 1);
        self.bases.len() - 1
    }

    fn add(&mut self, coeff: f64, pauli: PauliString, label: String) -> PlannedTerm {
        let basis = self.basis_for(pauli.flip_mask(), (pauli.y_count() % 4) as u8);
        self.bases[basis].covered.push(label);
        PlannedTerm { coeff, pauli, basis }
    }
}

/// Generator `Z_p` of a diagonal rotation, if the gate is one.
fn rotation_generator(n: usize, kind: GateKind, targets: &[usize]) -> Result<Option<PauliString>> {
    match kind {
        GateKind::Rz | GateKind::Rzz => Ok(Some(PauliString::on_qubits(n, targets, Pauli::Z)?)),
        _ => Ok(None),
    }
}

/// Plan for `h` plus the shifted strings of every parameterized gate in the
/// diagonal block `w` (assumed to sit at the end of the state preparation).
pub fn build_plan_for_block(h: &Hamiltonian, w: &Circuit) -> Result<MeasurementPlan> {
    let n = h.n_qubits();
    if w.n_qubits != n {
        return Err(Error::DimensionMismatch { expected: n, got: w.n_qubits });
    }
    if !w.is_diagonal() {
        return Err(Error::InvalidAnsatz("measurement plan requires a diagonal W block".into()));
    }
    let mut b = PlanBuilder::new(n);
    let energy_terms: Vec<PlannedTerm> = h
        .terms()
        .iter()
        .map(|t| b.add(t.coeff, t.pauli, format!("{:+} {}", t.coeff, t.pauli)))
        .collect();
    let mut shifted_terms = Vec::new();
    for gate in &w.gates {
        let Angle::Param { name, scale, .. } = &gate.angle else { continue };
        let Some(zp) = rotation_generator(n, gate.kind, &gate.targets)? else { continue };
        for t in h.terms() {
            if t.pauli.commutes_with(&zp)? {
                continue;
            }
            // L = i Z_p P is Hermitian: its phase is ±1
            let zp_p = zp.multiply(&t.pauli)?;
            let l = zp_p.with_phase_power(zp_p.phase_power() + 1);
            let sign = if l.phase_power() == 2 { -1.0 } else { 1.0 };
            let pauli = l.without_phase();
            let coeff = scale * sign * t.coeff;
            let term = b.add(coeff, pauli, format!("d/d{name}: {coeff:+} {pauli}"));
            shifted_terms.push(ShiftedTerm { param: name.clone(), term });
        }
    }
    let circuit_count = b.bases.len();
    Ok(MeasurementPlan { n_qubits: n, bases: b.bases, energy_terms, shifted_terms, circuit_count })
}

/// Plan for one iteration of layer `layer_index` of the hybrid optimizer.
pub fn build_measurement_plan(h: &Hamiltonian, ansatz: &SignAnsatz, layer_index: usize) -> Result<MeasurementPlan> {
    if ansatz.n_qubits != h.n_qubits() {
        return Err(Error::DimensionMismatch { expected: h.n_qubits(), got: ansatz.n_qubits });
    }
    build_plan_for_block(h, &ansatz.layer(layer_index)?.w)
}

/// Greedy qubit-wise-commuting grouping in term order: each term joins the
/// first group whose members agree with it on every qubit where both act.
pub fn qwc_groups(h: &Hamiltonian) -> Vec<Vec<usize>> {
    let mut groups: Vec<(Vec<usize>, Vec<Pauli>)> = Vec::new();
    for (i, t) in h.terms().iter().enumerate() {
        let ops = t.pauli.ops();
        let fits = |g: &Vec<Pauli>| g.iter().zip(&ops).all(|(a, b)| *a == Pauli::I || *b == Pauli::I || a == b);
        match groups.iter_mut().find(|(_, g)| fits(g)) {
            Some((members, g)) => {
                members.push(i);
                g.iter_mut().zip(&ops).for_each(|(a, b)| {
                    if *a == Pauli::I {
                        *a = *b;
                    }
                });
            }
            None => groups.push((vec![i], ops)),
        }
    }
    groups.into_iter().map(|(m, _)| m).collect()
}

/// Circuits per iteration of a circuit-only VQE with parameter-shift
/// gradients: every one of the `d` shifted gate occurrences needs two
/// evaluations, plus one unshifted, each over all QWC groups.
pub fn vqe_circuits_per_iteration(h: &Hamiltonian, circuit: &Circuit) -> usize {
    let d = circuit.gates.iter().filter(|g| matches!(g.angle, Angle::Param { .. })).count();
    (2 * d + 1) * qwc_groups(h).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::build_sign_ansatz;
    use crate::pauli::{build_ising_1d, build_j1j2_1d};

    #[test]
    fn j1j2_six_sites_needs_28_circuits() {
        let h = build_j1j2_1d(6, 1.0, 0.6, 1.0, 1.0, 0.0).unwrap();
        let a = build_sign_ansatz(6, &h.interaction_edges(), 1).unwrap();
        let plan = build_measurement_plan(&h, &a, 1).unwrap();
        assert_eq!(plan.circuit_count, 28);
        assert!(!plan.shifted_terms.is_empty());
    }

    #[test]
    fn diagonal_hamiltonian_needs_one_circuit() {
        let h = build_ising_1d(4, 1.0, 0.3).unwrap();
        let a = build_sign_ansatz(4, &h.interaction_edges(), 1).unwrap();
        let plan = build_measurement_plan(&h, &a, 1).unwrap();
        assert_eq!(plan.circuit_count, 1);
        assert!(plan.shifted_terms.is_empty());
    }

    #[test]
    fn non_diagonal_w_is_rejected() {
        let h = build_ising_1d(2, 1.0, 0.0).unwrap();
        let mut a = build_sign_ansatz(2, &[(0, 1)], 1).unwrap();
        a.layers[0].w.push_param(GateKind::Ry, &[0], "bad", 1.0);
        assert!(build_measurement_plan(&h, &a, 1).is_err());
    }

    #[test]
    fn qwc_grouping_of_heisenberg_bond() {
        let mut h = Hamiltonian::new(3);
        for w in ["XXI", "YYI", "ZZI", "IXX", "IYY", "IZZ"] {
            h.add(1.0, w).unwrap();
        }
        assert_eq!(qwc_groups(&h), vec![vec![0, 3], vec![1, 4], vec![2, 5]]);
    }
}
