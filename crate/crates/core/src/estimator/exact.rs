use indexmap::IndexMap;

use super::{EnergyEstimate, MeasurementPlan};
use crate::neural::{AmplitudeModel, ModelGradient};
use crate::pauli::{Hamiltonian, PauliString};
use crate::qsim::Statevector;
use crate::{Error, Result, C64};

/// `φ_s = f(s) · ψ_s` (unnormalized).
pub fn hybrid_amplitudes(state: &Statevector, f: &[C64]) -> Result<Vec<C64>> {
    if f.len() != state.dim() {
        return Err(Error::DimensionMismatch { expected: state.dim(), got: f.len() });
    }
    Ok(state.amplitudes().iter().zip(f).map(|(a, b)| a * b).collect())
}

fn norm_sqr(v: &[C64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum()
}

fn rayleigh(phi: &[C64], h: &Hamiltonian) -> Result<(f64, Vec<C64>, f64)> {
    let d = norm_sqr(phi);
    if !(d > 1e-300) {
        return Err(Error::DegenerateNormalization(d));
    }
    let hphi = h.apply(phi)?;
    let num: f64 = phi.iter().zip(&hphi).map(|(a, b)| (a.conj() * b).re).sum();
    Ok((num / d, hphi, d))
}

/// Exact hybrid energy for explicit amplitude values `f(s)`.
pub fn hybrid_energy_exact_f(state: &Statevector, f: &[C64], h: &Hamiltonian) -> Result<f64> {
    let phi = hybrid_amplitudes(state, f)?;
    Ok(rayleigh(&phi, h)?.0)
}

/// `Σ_i c_i ⟨ψ|F† P_i F|ψ⟩ / ⟨ψ|F† F|ψ⟩` by direct statevector arithmetic.
pub fn hybrid_energy_exact(state: &Statevector, model: &AmplitudeModel, h: &Hamiltonian) -> Result<EnergyEstimate> {
    check_model(state, model)?;
    Ok(EnergyEstimate::exact(hybrid_energy_exact_f(state, &model.evaluate_all(), h)?))
}

pub(crate) fn check_model(state: &Statevector, model: &AmplitudeModel) -> Result<()> {
    if model.n_qubits() != state.n_qubits() {
        return Err(Error::DimensionMismatch { expected: state.n_qubits(), got: model.n_qubits() });
    }
    Ok(())
}

/// Exact energy and its gradient with respect to the model weights.
///
/// With `φ = f·ψ`, `D = ⟨φ|φ⟩` and `E = ⟨φ|H|φ⟩/D`, the energy varies as
/// `δE = Σ_s Re(conj(δf_s) g_s)` with `g_s = 2[conj(ψ_s)(Hφ)_s − E f_s |ψ_s|²]/D`,
/// which is chained through the network by [`AmplitudeModel::backward_batch`].
pub fn nn_gradient_exact(
    state: &Statevector,
    model: &AmplitudeModel,
    h: &Hamiltonian,
) -> Result<(EnergyEstimate, ModelGradient)> {
    check_model(state, model)?;
    let f = model.evaluate_all();
    let phi = hybrid_amplitudes(state, &f)?;
    let (energy, hphi, d) = rayleigh(&phi, h)?;
    let upstream: Vec<(usize, C64)> = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(s, a)| (s, (a.conj() * hphi[s] - f[s] * a.norm_sqr() * energy) * (2.0 / d)))
        .filter(|(_, g)| g.norm_sqr() > 0.0)
        .collect();
    Ok((EnergyEstimate::exact(energy), model.backward_batch(&upstream)))
}

fn pauli_expectation_unnormalized(phi: &[C64], p: &PauliString) -> f64 {
    phi.iter()
        .enumerate()
        .map(|(s, &a)| {
            let (t, c) = p.apply_to_basis(s);
            (phi[t].conj() * c * a).re
        })
        .sum()
}

/// Exact `⟨F P F⟩ / ⟨F F⟩` for each string in `paulis`.
pub fn hybrid_pauli_expectations(state: &Statevector, f: &[C64], paulis: &[PauliString]) -> Result<Vec<f64>> {
    let phi = hybrid_amplitudes(state, f)?;
    let d = norm_sqr(&phi);
    paulis
        .iter()
        .map(|p| {
            if p.n_qubits() != state.n_qubits() {
                return Err(Error::DimensionMismatch { expected: state.n_qubits(), got: p.n_qubits() });
            }
            Ok(pauli_expectation_unnormalized(&phi, p) / d)
        })
        .collect()
}

/// Derivatives of the exact energy with respect to the parameters of the
/// plan's diagonal block, from the shifted strings `⟨F L F⟩ / ⟨F F⟩`.
pub fn w_gradient_exact(state: &Statevector, f: &[C64], plan: &MeasurementPlan) -> Result<IndexMap<String, f64>> {
    let phi = hybrid_amplitudes(state, f)?;
    let d = norm_sqr(&phi);
    let mut grad = IndexMap::new();
    for st in &plan.shifted_terms {
        let v = st.term.coeff * pauli_expectation_unnormalized(&phi, &st.term.pauli) / d;
        *grad.entry(st.param.clone()).or_insert(0.0) += v;
    }
    Ok(grad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neural::OutputMode;
    use crate::pauli::build_heisenberg_2d;
    use crate::rng::{substream, Stream};

    #[test]
    fn constant_model_matches_plain_expectation() {
        let mut rng = substream(1, Stream::Aux);
        let psi = Statevector::random(3, &mut rng).unwrap();
        let h = build_heisenberg_2d(1, 3, 1.0, 1.0).unwrap();
        let plain = h.expectation(&psi).unwrap();
        let f = vec![C64::new(2.5, 0.0); 8];
        assert!((hybrid_energy_exact_f(&psi, &f, &h).unwrap() - plain).abs() < 1e-12);
        let dead = AmplitudeModel::zeros(3, &[3], OutputMode::NonNeg).unwrap();
        assert!((hybrid_energy_exact(&psi, &dead, &h).unwrap().value - plain).abs() < 1e-12);
    }

    #[test]
    fn zero_amplitudes_are_degenerate() {
        let psi = Statevector::zero(2).unwrap();
        let h = build_heisenberg_2d(1, 2, 0.0, 1.0).unwrap();
        let f = vec![C64::new(0.0, 0.0); 4];
        assert!(matches!(hybrid_energy_exact_f(&psi, &f, &h), Err(Error::DegenerateNormalization(_))));
    }
}
