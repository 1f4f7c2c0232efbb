use rayon::prelude::*;

use super::plan::qwc_groups;
use super::shots::sample_suffix;
use super::{EnergyEstimate, Mode, ShotOptions};
use crate::pauli::{Hamiltonian, Pauli};
use crate::qsim::{qubit_mask, Gate, GateKind, Statevector};
use crate::{Error, Result};

/// Basis-change suffix that maps every qubit's Pauli in `ops` to Z.
fn rotation_suffix(ops: &[Pauli]) -> Vec<Gate> {
    let mut out = Vec::new();
    for (q, op) in ops.iter().enumerate() {
        match op {
            Pauli::X => out.push(Gate::h(q)),
            Pauli::Y => {
                out.push(Gate::fixed(GateKind::Sdg, q));
                out.push(Gate::h(q));
            }
            _ => {}
        }
    }
    out
}

struct GroupSamples {
    /// `(term index, coefficient, support mask)` of each member.
    members: Vec<(usize, f64, usize)>,
    outcomes: Vec<usize>,
}

fn sample_groups(n_qubits: usize, prep: &[Gate], h: &Hamiltonian, opts: &ShotOptions, seed: u64) -> Result<Vec<GroupSamples>> {
    if h.n_qubits() != n_qubits {
        return Err(Error::DimensionMismatch { expected: n_qubits, got: h.n_qubits() });
    }
    if opts.shots_per_basis < 2 {
        return Err(Error::TooFewSamples { got: opts.shots_per_basis, min: 2 });
    }
    opts.noise.validate()?;
    let mut base = Statevector::zero(n_qubits)?;
    if opts.noise.is_noiseless() {
        base.apply_all(prep)?;
    } else {
        prep.iter().try_for_each(|g| g.validate(n_qubits))?;
    }
    qwc_groups(h)
        .par_iter()
        .enumerate()
        .map(|(gi, idx)| {
            let mut ops = vec![Pauli::I; n_qubits];
            let mut members = Vec::with_capacity(idx.len());
            for &i in idx {
                let term = &h.terms()[i];
                let mut m = 0usize;
                for q in term.pauli.support() {
                    ops[q] = term.pauli.op(q);
                    m |= qubit_mask(n_qubits, q);
                }
                members.push((i, term.coeff, m));
            }
            let outcomes = sample_suffix(&base, prep, &rotation_suffix(&ops), opts, seed, gi as u64)?;
            Ok(GroupSamples { members, outcomes })
        })
        .collect()
}

#[inline]
fn parity_sign(t: usize, m: usize) -> f64 {
    if (t & m).count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Plain circuit energy `⟨ψ|H|ψ⟩` from shots: one circuit per greedy
/// qubit-wise-commuting group, `opts.shots_per_basis` shots each.
///
/// The standard error combines the per-group sample variances of the group
/// sums.
pub fn qwc_energy_shots(
    n_qubits: usize,
    prep: &[Gate],
    h: &Hamiltonian,
    opts: &ShotOptions,
    seed: u64,
) -> Result<EnergyEstimate> {
    let groups = sample_groups(n_qubits, prep, h, opts, seed)?;
    let mut value = 0.0;
    let mut var = 0.0;
    for g in &groups {
        let values: Vec<f64> = g
            .outcomes
            .iter()
            .map(|&t| g.members.iter().map(|&(_, c, m)| c * parity_sign(t, m)).sum())
            .collect();
        let k = values.len() as f64;
        let mean = values.iter().sum::<f64>() / k;
        value += mean;
        var += values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0) / k;
    }
    Ok(EnergyEstimate {
        value,
        std_error: var.sqrt(),
        n_shots_used: (groups.len() * opts.shots_per_basis) as u64,
        mode: Mode::ShotProtocol,
    })
}

/// Shot estimates of `⟨ψ|P_i|ψ⟩` for every term of `h` (coefficients not
/// applied), from the same grouped circuits as [`qwc_energy_shots`].
pub fn qwc_term_expectations(
    n_qubits: usize,
    prep: &[Gate],
    h: &Hamiltonian,
    opts: &ShotOptions,
    seed: u64,
) -> Result<Vec<f64>> {
    let mut out = vec![0.0; h.len()];
    for g in sample_groups(n_qubits, prep, h, opts, seed)? {
        let k = g.outcomes.len() as f64;
        for &(i, _, m) in &g.members {
            out[i] = g.outcomes.iter().map(|&t| parity_sign(t, m)).sum::<f64>() / k;
        }
    }
    Ok(out)
}
