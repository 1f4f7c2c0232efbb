use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::{jackknife, EnergyEstimate, MeasurementPlan, Mode, JACKKNIFE_BLOCKS};
use crate::neural::{AmplitudeModel, ModelGradient};
use crate::pauli::Hamiltonian;
use crate::qsim::Statevector;
use crate::rng::{self, Stream};
use crate::{Error, Result, C64};

/// Smallest sample count accepted by the sampled-amplitude estimator.
pub const MIN_SAMPLES: usize = 100;

/// Basis samples with the amplitude-model and circuit values at each.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch {
    pub bitstrings: Vec<usize>,
    pub f_values: Vec<C64>,
    pub amplitudes: Vec<C64>,
    pub seed: u64,
}

impl SampleBatch {
    /// `ĝ = (1/n_s) Σ_i |f(s_i)|²`, the sampled normalization.
    pub fn g_hat(&self) -> f64 {
        self.f_values.iter().map(|f| f.norm_sqr()).sum::<f64>() / self.f_values.len() as f64
    }
}

struct Local {
    /// Per-sample numerator `Re(conj(φ_s)(Hφ)_s)/|ψ_s|²` and denominator `|f_s|²`.
    num: Vec<f64>,
    den: Vec<f64>,
}

fn draw(state: &Statevector, model: &AmplitudeModel, n_s: usize, seed: u64) -> Result<(Vec<C64>, Vec<usize>)> {
    if n_s < MIN_SAMPLES {
        return Err(Error::TooFewSamples { got: n_s, min: MIN_SAMPLES });
    }
    super::exact::check_model(state, model)?;
    let f = model.evaluate_all();
    let mut rng = rng::substream(seed, Stream::Sampling);
    Ok((f, state.sample(n_s, &mut rng)))
}

fn local_values(state: &Statevector, f: &[C64], h: &Hamiltonian, samples: &[usize]) -> Local {
    let a = state.amplitudes();
    let mut num = Vec::with_capacity(samples.len());
    let mut den = Vec::with_capacity(samples.len());
    for &s in samples {
        let mut acc = C64::new(0.0, 0.0);
        for term in h.terms() {
            let t = s ^ term.pauli.flip_mask() as usize;
            let (_, c) = term.pauli.apply_to_basis(t);
            acc += c * f[t] * a[t] * term.coeff;
        }
        num.push(((f[s] * a[s]).conj() * acc).re / a[s].norm_sqr());
        den.push(f[s].norm_sqr());
    }
    Local { num, den }
}

fn ratio_estimate(local: &Local, n_s: usize) -> Result<EnergyEstimate> {
    let total_den: f64 = local.den.iter().sum();
    if total_den / (n_s as f64) < 1e-12 {
        return Err(Error::DegenerateNormalization(total_den / n_s as f64));
    }
    let total_num: f64 = local.num.iter().sum();
    let mut bn = vec![0.0; JACKKNIFE_BLOCKS];
    let mut bd = vec![0.0; JACKKNIFE_BLOCKS];
    for i in 0..n_s {
        let b = i * JACKKNIFE_BLOCKS / n_s;
        bn[b] += local.num[i];
        bd[b] += local.den[i];
    }
    let loo: Vec<f64> = (0..JACKKNIFE_BLOCKS).map(|j| (total_num - bn[j]) / (total_den - bd[j])).collect();
    let (value, std_error) = jackknife(total_num / total_den, &loo);
    Ok(EnergyEstimate { value, std_error, n_shots_used: n_s as u64, mode: Mode::SampledAmplitude })
}

/// Ratio estimate of the hybrid energy from `n_s` samples `s ~ |⟨s|ψ⟩|²`.
///
/// Numerator local values `Re(conj(f(s)ψ_s) Σ_i c_i (P_i φ)_s)/|ψ_s|²` use
/// amplitude ratios read from the simulator; the denominator is
/// `ĝ = mean f(s)²`. The error bar and first-order bias correction come from a
/// 20-block jackknife.
pub fn hybrid_energy_sampled(
    state: &Statevector,
    model: &AmplitudeModel,
    h: &Hamiltonian,
    n_s: usize,
    seed: u64,
) -> Result<EnergyEstimate> {
    let (f, samples) = draw(state, model, n_s, seed)?;
    ratio_estimate(&local_values(state, &f, h, &samples), n_s)
}

/// Sampled energy and the gradient of the same empirical ratio with respect to
/// the model weights.
pub fn nn_gradient_sampled(
    state: &Statevector,
    model: &AmplitudeModel,
    h: &Hamiltonian,
    n_s: usize,
    seed: u64,
) -> Result<(EnergyEstimate, ModelGradient)> {
    let (f, samples) = draw(state, model, n_s, seed)?;
    let local = local_values(state, &f, h, &samples);
    let estimate = ratio_estimate(&local, n_s)?;
    let total_den: f64 = local.den.iter().sum();
    let energy = local.num.iter().sum::<f64>() / total_den;
    let a = state.amplitudes();
    let mut upstream = vec![C64::new(0.0, 0.0); f.len()];
    for &s in &samples {
        let w = 1.0 / a[s].norm_sqr();
        let mut y = C64::new(0.0, 0.0);
        for term in h.terms() {
            let t = s ^ term.pauli.flip_mask() as usize;
            let (_, c) = term.pauli.apply_to_basis(t);
            let k = c * a[t] * term.coeff;
            y += k * f[t];
            // ∂/∂f_t of Re(conj(f_s ψ_s) k f_t) w
            upstream[t] += (f[s] * a[s] * k.conj()) * w;
        }
        upstream[s] += a[s].conj() * y * w;
        upstream[s] -= f[s] * (2.0 * energy);
    }
    let items: Vec<(usize, C64)> = upstream
        .into_iter()
        .enumerate()
        .filter(|(_, g)| g.norm_sqr() > 0.0)
        .map(|(s, g)| (s, g / total_den))
        .collect();
    Ok((estimate, model.backward_batch(&items)))
}

/// Diagonal-block gradient from the same samples as [`nn_gradient_sampled`]
/// (same `seed`): each shifted string `L` contributes the ratio
/// `Σ_i Re(conj(φ_{s_i}) (Lφ)_{s_i})/|ψ_{s_i}|² / Σ_i |f(s_i)|²`.
pub fn w_gradient_sampled(
    state: &Statevector,
    model: &AmplitudeModel,
    plan: &MeasurementPlan,
    n_s: usize,
    seed: u64,
) -> Result<IndexMap<String, f64>> {
    if plan.n_qubits != state.n_qubits() {
        return Err(Error::DimensionMismatch { expected: state.n_qubits(), got: plan.n_qubits });
    }
    let (f, samples) = draw(state, model, n_s, seed)?;
    let a = state.amplitudes();
    let den: f64 = samples.iter().map(|&s| f[s].norm_sqr()).sum();
    let mut grad = IndexMap::new();
    for st in &plan.shifted_terms {
        let p = &st.term.pauli;
        let mut num = 0.0;
        for &s in &samples {
            let t = s ^ p.flip_mask() as usize;
            let (_, c) = p.apply_to_basis(t);
            num += ((f[s] * a[s]).conj() * c * f[t] * a[t]).re / a[s].norm_sqr();
        }
        *grad.entry(st.param.clone()).or_insert(0.0) += st.term.coeff * num / den;
    }
    Ok(grad)
}
