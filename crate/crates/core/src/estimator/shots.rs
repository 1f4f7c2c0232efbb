//! Shot-based hybrid estimation from measurement outcomes only.
//!
//! For an off-diagonal string `P` with flip set `B` (pivot `p`, its lowest
//! qubit) and `y` Y operators, the basis circuit appends CNOTs from `p` to the
//! rest of `B`, `diag(1, (−i)^y)` on `p` and `H` on `p`. A basis pair
//! `(s⁰, s¹ = s⁰ ⊕ B)` with `p` clear in `s⁰` then interferes on the pivot, and
//! for real amplitudes `f`
//!
//! `⟨ψ|F P F|ψ⟩ = E_t[(−1)^{t_p} · (−1)^{|s⁰ ∧ z_P|} · f(s⁰) f(s¹)]`
//!
//! where `s⁰` is the outcome `t` with the pivot bit cleared. Diagonal strings
//! and the normalization `⟨ψ|F²|ψ⟩ = E_s[f(s)²]` come from the unmodified
//! computational-basis circuit.

use indexmap::IndexMap;
use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{build_plan_for_block, jackknife, BlockSums, EnergyEstimate, MeasurementPlan, Mode, PlannedTerm};
use crate::ansatz::Circuit;
use crate::neural::{AmplitudeModel, ModelGradient, OutputMode};
use crate::pauli::Hamiltonian;
use crate::qsim::{apply_noisy, qubit_mask, Gate, NoiseSpec, Statevector};
use crate::rng::{self, Stream};
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShotOptions {
    pub shots_per_basis: usize,
    #[serde(default)]
    pub noise: NoiseSpec,
    /// Noise trajectories per basis circuit; shots are split evenly across them.
    #[serde(default = "default_trajectories")]
    pub trajectories_per_basis: usize,
}

fn default_trajectories() -> usize {
    32
}

impl ShotOptions {
    pub fn noiseless(shots_per_basis: usize) -> Self {
        Self { shots_per_basis, noise: NoiseSpec::NONE, trajectories_per_basis: default_trajectories() }
    }
}

/// Outcomes per plan basis, in plan order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShotSamples {
    pub outcomes: Vec<Vec<usize>>,
}

impl ShotSamples {
    pub fn total_shots(&self) -> u64 {
        self.outcomes.iter().map(|o| o.len() as u64).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShotResult {
    pub energy: EnergyEstimate,
    /// Derivatives for the plan's diagonal-block parameters.
    pub w_gradient: IndexMap<String, f64>,
    pub nn_gradient: Option<ModelGradient>,
}

/// Runs every basis circuit of `plan` after the state preparation `prep`.
///
/// Each basis uses its own sampling (and noise) substream derived from `seed`.
pub fn collect_shots(
    n_qubits: usize,
    prep: &[Gate],
    plan: &MeasurementPlan,
    opts: &ShotOptions,
    seed: u64,
) -> Result<ShotSamples> {
    if opts.shots_per_basis == 0 {
        return Err(Error::TooFewSamples { got: 0, min: 1 });
    }
    if plan.n_qubits != n_qubits {
        return Err(Error::DimensionMismatch { expected: n_qubits, got: plan.n_qubits });
    }
    opts.noise.validate()?;
    let mut base = Statevector::zero(n_qubits)?;
    if opts.noise.is_noiseless() {
        base.apply_all(prep)?;
    } else {
        prep.iter().try_for_each(|g| g.validate(n_qubits))?;
    }
    let outcomes = plan
        .bases
        .par_iter()
        .enumerate()
        .map(|(i, basis)| sample_suffix(&base, prep, &basis.suffix, opts, seed, i as u64))
        .collect::<Result<Vec<_>>>()?;
    Ok(ShotSamples { outcomes })
}

/// Samples `prep · suffix` with the substreams of circuit `index`. `base` is the
/// already-prepared noiseless state; with noise the full gate list is rerun
/// per trajectory and the shots are spread evenly across trajectories.
pub(crate) fn sample_suffix(
    base: &Statevector,
    prep: &[Gate],
    suffix: &[Gate],
    opts: &ShotOptions,
    seed: u64,
    index: u64,
) -> Result<Vec<usize>> {
    let n_qubits = base.n_qubits();
    let mut sampler = rng::derived(seed, Stream::Sampling, index);
    if opts.noise.is_noiseless() {
        let mut sv = base.clone();
        sv.apply_all(suffix)?;
        return Ok(sv.sample(opts.shots_per_basis, &mut sampler));
    }
    let mut noise_rng = rng::derived(seed, Stream::Noise, index);
    let gates: Vec<Gate> = prep.iter().chain(suffix).cloned().collect();
    let n_traj = opts.trajectories_per_basis.clamp(1, opts.shots_per_basis);
    let mut out = Vec::with_capacity(opts.shots_per_basis);
    for j in 0..n_traj {
        let shots = opts.shots_per_basis * (j + 1) / n_traj - opts.shots_per_basis * j / n_traj;
        let mut sv = Statevector::zero(n_qubits)?;
        apply_noisy(&mut sv, &gates, opts.noise, &mut noise_rng)?;
        out.extend(sv.sample(shots, &mut sampler));
    }
    // interleave trajectories so jackknife blocks mix noise realizations
    shuffle(&mut out, &mut sampler);
    Ok(out)
}

fn shuffle(v: &mut [usize], rng: &mut rng::Rng) {
    for i in (1..v.len()).rev() {
        let j = rng.random_range(0..=i);
        v.swap(i, j);
    }
}

/// Per-shot contribution of one planned term and the pair `(s⁰, s¹, sign)` it reads.
#[inline]
fn shot_pair(n: usize, plan: &MeasurementPlan, term: &PlannedTerm, t: usize) -> (usize, usize, f64) {
    match plan.bases[term.basis].pivot {
        None => (t, t, term.pauli.z_sign(t)),
        Some(p) => {
            let pm = qubit_mask(n, p);
            let s0 = t & !pm;
            let s1 = s0 ^ term.pauli.flip_mask() as usize;
            let b = if t & pm != 0 { -1.0 } else { 1.0 };
            (s0, s1, b * term.pauli.z_sign(s0))
        }
    }
}

fn real_f(f: &[C64]) -> Result<Vec<f64>> {
    if f.iter().any(|v| v.im != 0.0) {
        return Err(Error::Estimator("the shot protocol supports real amplitude models only".into()));
    }
    Ok(f.iter().map(|v| v.re).collect())
}

/// Estimates from collected outcomes: energy with jackknife error, the
/// diagonal-block gradient from the shifted strings, and optionally the model
/// gradient of the same empirical ratio.
pub fn evaluate_shots(
    plan: &MeasurementPlan,
    samples: &ShotSamples,
    f: &[C64],
    model_for_gradient: Option<&AmplitudeModel>,
) -> Result<ShotResult> {
    let n = plan.n_qubits;
    if samples.outcomes.len() != plan.bases.len() {
        return Err(Error::DimensionMismatch { expected: plan.bases.len(), got: samples.outcomes.len() });
    }
    if let Some((i, _)) = samples.outcomes.iter().enumerate().find(|(_, o)| o.is_empty()) {
        return Err(Error::Estimator(format!("no outcomes for basis {i}")));
    }
    let f = real_f(f)?;
    let comp = &samples.outcomes[0];
    let den_values: Vec<f64> = comp.iter().map(|&t| f[t] * f[t]).collect();
    let den = BlockSums::from_values(&den_values);
    let d = den.mean();
    if !(d > 1e-12) {
        return Err(Error::DegenerateNormalization(d));
    }

    // per-basis per-shot sums of the energy terms
    let mut per_basis: Vec<Vec<f64>> = samples.outcomes.iter().map(|o| vec![0.0; o.len()]).collect();
    for term in &plan.energy_terms {
        for (k, &t) in samples.outcomes[term.basis].iter().enumerate() {
            let (s0, s1, sign) = shot_pair(n, plan, term, t);
            per_basis[term.basis][k] += term.coeff * sign * f[s0] * f[s1];
        }
    }
    let blocks: Vec<BlockSums> = per_basis.iter().map(|v| BlockSums::from_values(v)).collect();
    let num: f64 = blocks.iter().map(|b| b.mean()).sum();
    let loo: Vec<f64> = (0..super::JACKKNIFE_BLOCKS)
        .map(|j| blocks.iter().map(|b| b.mean_without(j)).sum::<f64>() / den.mean_without(j))
        .collect();
    let (value, std_error) = jackknife(num / d, &loo);
    let energy = EnergyEstimate { value, std_error, n_shots_used: samples.total_shots(), mode: Mode::ShotProtocol };

    let mut w_gradient = IndexMap::new();
    for st in &plan.shifted_terms {
        let outs = &samples.outcomes[st.term.basis];
        let mean = outs
            .iter()
            .map(|&t| {
                let (s0, s1, sign) = shot_pair(n, plan, &st.term, t);
                sign * f[s0] * f[s1]
            })
            .sum::<f64>()
            / outs.len() as f64;
        *w_gradient.entry(st.param.clone()).or_insert(0.0) += st.term.coeff * mean / d;
    }

    let nn_gradient = match model_for_gradient {
        None => None,
        Some(model) => {
            if model.mode == OutputMode::Complex {
                return Err(Error::Estimator("the shot protocol supports real amplitude models only".into()));
            }
            let e = num / d;
            let mut up = vec![0.0; f.len()];
            for term in &plan.energy_terms {
                let outs = &samples.outcomes[term.basis];
                let w = term.coeff / outs.len() as f64;
                for &t in outs {
                    let (s0, s1, sign) = shot_pair(n, plan, term, t);
                    up[s0] += w * sign * f[s1];
                    up[s1] += w * sign * f[s0];
                }
            }
            for &t in comp {
                up[t] -= e * 2.0 * f[t] / comp.len() as f64;
            }
            let items: Vec<(usize, C64)> = up
                .into_iter()
                .enumerate()
                .filter(|(_, g)| *g != 0.0)
                .map(|(s, g)| (s, C64::new(g / d, 0.0)))
                .collect();
            Some(model.backward_batch(&items))
        }
    };
    Ok(ShotResult { energy, w_gradient, nn_gradient })
}

/// Per-term ratio estimates `⟨F P_i F⟩ / ⟨F F⟩` (coefficients not applied) for
/// every energy term of `plan`, in term order.
pub fn term_expectations_shots(plan: &MeasurementPlan, samples: &ShotSamples, f: &[C64]) -> Result<Vec<f64>> {
    let n = plan.n_qubits;
    if samples.outcomes.len() != plan.bases.len() || samples.outcomes.iter().any(|o| o.is_empty()) {
        return Err(Error::DimensionMismatch { expected: plan.bases.len(), got: samples.outcomes.len() });
    }
    let f = real_f(f)?;
    let comp = &samples.outcomes[0];
    let d = comp.iter().map(|&t| f[t] * f[t]).sum::<f64>() / comp.len() as f64;
    if !(d > 1e-12) {
        return Err(Error::DegenerateNormalization(d));
    }
    Ok(plan
        .energy_terms
        .iter()
        .map(|term| {
            let outs = &samples.outcomes[term.basis];
            let m = outs
                .iter()
                .map(|&t| {
                    let (s0, s1, sign) = shot_pair(n, plan, term, t);
                    sign * f[s0] * f[s1]
                })
                .sum::<f64>()
                / outs.len() as f64;
            m / d
        })
        .collect())
}

/// Shot-protocol hybrid energy of `circuit` followed by the model, with
/// `shots_per_basis` shots in each circuit of the energy plan.
pub fn hybrid_energy_shots(
    circuit: &Circuit,
    model: &AmplitudeModel,
    h: &Hamiltonian,
    shots_per_basis: usize,
    noise: NoiseSpec,
    seed: u64,
) -> Result<EnergyEstimate> {
    let n = h.n_qubits();
    if circuit.n_qubits != n || model.n_qubits() != n {
        return Err(Error::DimensionMismatch { expected: n, got: circuit.n_qubits.max(model.n_qubits()) });
    }
    let plan = build_plan_for_block(h, &Circuit::new(n))?;
    let opts = ShotOptions { shots_per_basis, noise, trajectories_per_basis: default_trajectories() };
    let samples = collect_shots(n, &circuit.bind()?, &plan, &opts, seed)?;
    Ok(evaluate_shots(&plan, &samples, &model.evaluate_all(), None)?.energy)
}
