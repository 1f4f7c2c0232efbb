//! Gradual amplitude transfer: fit a new per-qubit Ry block `G_l` so that it
//! reproduces the amplitude profile of the current model `F`, then reset `F`.
//!
//! For test states `|ψ_k⟩` the fit compares `P_F^k(s) ∝ |f(s)⟨s|ψ_k⟩|²` with
//! `P_G^k(s) = |⟨s|G|ψ_k⟩|²` through a weighted KL divergence. Test state
//! `k = 0` is the circuit state the model currently multiplies (weight ½);
//! the others are Haar-random and share the remaining weight.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::ansatz::{Angle, Circuit, SignAnsatz};
use crate::estimator::hybrid_energy_exact;
use crate::neural::AmplitudeModel;
use crate::optim::Adam;
use crate::pauli::Hamiltonian;
use crate::qsim::{Gate, GateKind, Statevector};
use crate::rng::{self, Stream};
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransferObjective {
    /// `KL(P_F ‖ P_G)`: mass-covering toward the model's profile.
    #[default]
    KlForward,
    /// `KL(P_G ‖ P_F)`.
    KlReverse,
    /// Global `‖G − F‖_F`; degenerate for per-qubit Ry blocks and rejected.
    Frobenius,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TransferConfig {
    pub objective: TransferObjective,
    /// Total number of test states, including the current circuit state.
    pub n_test_states: usize,
    pub lr: f64,
    pub max_iterations: usize,
    /// Relative energy-increase tolerance checked after transfer + reset.
    pub energy_tolerance: f64,
}

impl Default for TransferConfig {
    fn default() -> Self {
        Self {
            objective: TransferObjective::KlForward,
            n_test_states: 8,
            lr: 0.05,
            max_iterations: 500,
            energy_tolerance: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferReport {
    pub layer: usize,
    /// Fitted Ry angles, one per qubit.
    pub angles: Vec<f64>,
    /// Final weighted KL divergence (nats).
    pub residual: f64,
    pub iterations: usize,
    pub n_test_states: usize,
    pub converged: bool,
    pub energy_before: Option<f64>,
    pub energy_after: Option<f64>,
    /// `energy_after − energy_before ≤ tolerance · |energy_before|`.
    pub within_tolerance: Option<bool>,
    /// `Var_{s∼|ψ|²} f(s)²` before and after, each normalized by its mean².
    pub f2_spread_before: Option<f64>,
    pub f2_spread_after: Option<f64>,
}

/// Qubit order of the Ry parameters of a per-qubit Ry layer.
fn ry_layer_params(template: &Circuit) -> Result<Vec<String>> {
    let n = template.n_qubits;
    let mut names = vec![None; n];
    for g in &template.gates {
        let (GateKind::Ry, Angle::Param { name, scale, offset }) = (g.kind, &g.angle) else {
            return Err(Error::Transfer("G template must contain parameterized Ry gates only".into()));
        };
        if *scale != 1.0 || *offset != 0.0 || names[g.targets[0]].is_some() {
            return Err(Error::Transfer("G template must be one plain Ry per qubit".into()));
        }
        names[g.targets[0]] = Some(name.clone());
    }
    names
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Transfer("G template must act on every qubit".into()))
}

struct TestState {
    weight: f64,
    psi: Statevector,
    p_f: Vec<f64>,
}

fn apply_ry_layer(psi: &Statevector, angles: &[f64], derivative_on: Option<usize>) -> Statevector {
    let mut sv = psi.clone();
    for (q, &a) in angles.iter().enumerate() {
        // dRy(θ)/dθ = ½ Ry(θ + π)
        let a = if derivative_on == Some(q) { a + PI } else { a };
        sv.apply_unchecked(&Gate::ry(q, a));
    }
    if derivative_on.is_some() {
        let half = C64::new(0.5, 0.0);
        let amps = sv.into_amplitudes().into_iter().map(|x| x * half).collect::<Vec<_>>();
        return Statevector::from_raw(amps);
    }
    sv
}

const P_FLOOR: f64 = 1e-300;

fn kl(objective: TransferObjective, p_f: &[f64], p_g: &[f64]) -> f64 {
    p_f.iter()
        .zip(p_g)
        .map(|(&pf, &pg)| match objective {
            TransferObjective::KlReverse if pg > 0.0 => pg * (pg / pf.max(P_FLOOR)).ln(),
            TransferObjective::KlForward if pf > 0.0 => pf * (pf / pg.max(P_FLOOR)).ln(),
            _ => 0.0,
        })
        .sum::<f64>()
        .max(0.0)
}

fn objective_and_gradient(objective: TransferObjective, states: &[TestState], angles: &[f64]) -> (f64, Vec<f64>) {
    let n = angles.len();
    let mut value = 0.0;
    let mut grad = vec![0.0; n];
    for ts in states {
        let g_psi = apply_ry_layer(&ts.psi, angles, None);
        let p_g = g_psi.probabilities();
        value += ts.weight * kl(objective, &ts.p_f, &p_g);
        for (q, gq) in grad.iter_mut().enumerate() {
            let d_psi = apply_ry_layer(&ts.psi, angles, Some(q));
            let mut d = 0.0;
            for s in 0..p_g.len() {
                let dp = 2.0 * (g_psi.amplitudes()[s].conj() * d_psi.amplitudes()[s]).re;
                d += match objective {
                    TransferObjective::KlReverse if p_g[s] > 0.0 => dp * (p_g[s] / ts.p_f[s].max(P_FLOOR)).ln(),
                    TransferObjective::KlForward => -ts.p_f[s] * dp / p_g[s].max(P_FLOOR),
                    _ => 0.0,
                };
            }
            *gq += ts.weight * d;
        }
    }
    (value, grad)
}

/// Fits the angles of the per-qubit Ry layer `g_template` so that
/// `|G ψ_k|²` matches the model's profile on the test states.
///
/// Adam from `θ = 0`; a step that increases the objective is rejected and the
/// learning rate halved, so accepted iterates descend monotonically.
pub fn fit_g_to_f(
    model: &AmplitudeModel,
    prev_state: &Statevector,
    g_template: &Circuit,
    config: &TransferConfig,
    seed: u64,
) -> Result<TransferReport> {
    let n = prev_state.n_qubits();
    if g_template.n_qubits != n || model.n_qubits() != n {
        return Err(Error::DimensionMismatch { expected: n, got: g_template.n_qubits });
    }
    if config.objective == TransferObjective::Frobenius {
        return Err(Error::Transfer(
            "Frobenius matching is degenerate for a per-qubit Ry block: its diagonal is constant over s".into(),
        ));
    }
    ry_layer_params(g_template)?;
    if config.n_test_states == 0 {
        return Err(Error::Transfer("need at least one test state".into()));
    }
    let f = model.evaluate_all();
    let mut rng = rng::substream(seed, Stream::Transfer);
    let k = config.n_test_states;
    let mut states = Vec::with_capacity(k);
    for i in 0..k {
        let psi = if i == 0 { prev_state.clone() } else { Statevector::random(n, &mut rng)? };
        let weight = if k == 1 { 1.0 } else if i == 0 { 0.5 } else { 0.5 / (k - 1) as f64 };
        let raw: Vec<f64> = psi.amplitudes().iter().zip(&f).map(|(a, fs)| (a * fs).norm_sqr()).collect();
        let total: f64 = raw.iter().sum();
        if !(total > 0.0) {
            return Err(Error::DegenerateNormalization(total));
        }
        states.push(TestState { weight, psi, p_f: raw.into_iter().map(|p| p / total).collect() });
    }

    let mut angles = vec![0.0; n];
    let (mut value, mut grad) = objective_and_gradient(config.objective, &states, &angles);
    let mut adam = Adam::new(config.lr);
    let mut iterations = 0;
    let mut converged = false;
    while iterations < config.max_iterations {
        iterations += 1;
        if value < 1e-14 || grad.iter().map(|g| g * g).sum::<f64>().sqrt() < 1e-10 {
            converged = true;
            break;
        }
        let mut trial = angles.clone();
        let saved = adam.clone();
        adam.step(&mut trial, &grad);
        let (tv, tg) = objective_and_gradient(config.objective, &states, &trial);
        if tv <= value {
            let improvement = value - tv;
            angles = trial;
            value = tv;
            grad = tg;
            if improvement < 1e-13 * value.max(1e-300) && improvement < 1e-15 {
                converged = true;
                break;
            }
        } else {
            adam = saved;
            adam.lr *= 0.5;
            if adam.lr < 1e-12 {
                converged = true;
                break;
            }
        }
    }
    Ok(TransferReport {
        layer: 0,
        angles,
        residual: value,
        iterations,
        n_test_states: k,
        converged,
        energy_before: None,
        energy_after: None,
        within_tolerance: None,
        f2_spread_before: None,
        f2_spread_after: None,
    })
}

/// `Var_{s∼|ψ|²}(|f(s)|²) / E[|f(s)|²]²`.
pub fn f2_spread(state: &Statevector, f: &[C64]) -> f64 {
    let p = state.probabilities();
    let f2: Vec<f64> = f.iter().map(|x| x.norm_sqr()).collect();
    let mean: f64 = p.iter().zip(&f2).map(|(a, b)| a * b).sum();
    let var: f64 = p.iter().zip(&f2).map(|(a, b)| a * (b - mean).powi(2)).sum();
    var / (mean * mean)
}

/// Fixes `G_l` of layer `layer_index ≥ 2` from the current model, then resets
/// the model to (near) identity.
///
/// Exact-mode energies before and after are recorded, with
/// `within_tolerance` flagging whether the increase stayed below
/// `config.energy_tolerance · |E_before|`.
pub fn transfer_step(
    ansatz: &mut SignAnsatz,
    model: &mut AmplitudeModel,
    layer_index: usize,
    h: &Hamiltonian,
    config: &TransferConfig,
    seed: u64,
) -> Result<TransferReport> {
    if layer_index < 2 {
        return Err(Error::Transfer("layer 1 uses the fixed Hadamard block; transfer starts at layer 2".into()));
    }
    let prev_state = ansatz.hybrid_circuit(layer_index - 1)?.simulate()?;
    let before = hybrid_energy_exact(&prev_state, model, h)?.value;
    let spread_before = f2_spread(&prev_state, &model.evaluate_all());
    let g = ansatz.layer(layer_index)?.g.clone();
    let mut report = fit_g_to_f(model, &prev_state, &g, config, seed)?;
    let names = ry_layer_params(&g)?;
    for (name, &a) in names.iter().zip(&report.angles) {
        ansatz.set_param(name, a)?;
    }
    let mut rng = rng::derived(seed, Stream::Transfer, layer_index as u64);
    model.reset_to_identity(&mut rng);
    let new_state = ansatz.hybrid_circuit(layer_index)?.simulate()?;
    let after = hybrid_energy_exact(&new_state, model, h)?.value;
    report.layer = layer_index;
    report.energy_before = Some(before);
    report.energy_after = Some(after);
    report.within_tolerance = Some(after - before <= config.energy_tolerance * before.abs());
    report.f2_spread_before = Some(spread_before);
    report.f2_spread_after = Some(f2_spread(&new_state, &model.evaluate_all()));
    Ok(report)
}
