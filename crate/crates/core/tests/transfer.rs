//! Profile transfer into the per-qubit Ry block against closed forms and a
//! brute-force search.

use std::f64::consts::{FRAC_PI_4, PI};

use svqnhe::ansatz::build_sign_ansatz;
use svqnhe::estimator::hybrid_energy_exact;
use svqnhe::neural::{AmplitudeModel, OutputMode, PositiveActivation};
use svqnhe::pauli::{build_heisenberg_2d, build_tfim_1d};
use svqnhe::qsim::{Gate, Statevector};
use svqnhe::rng::{substream, Stream};
use svqnhe::transfer::{fit_g_to_f, transfer_step, TransferConfig};

/// `f(s) = exp(b + Σ_j w_j x_j)` with `x_j = ±1`: a product over qubits.
fn product_model(weights: &[f64]) -> AmplitudeModel {
    let mut m = AmplitudeModel::zeros(weights.len(), &[], OutputMode::NonNeg).unwrap();
    m.activation = PositiveActivation::Exp;
    m.params[..weights.len()].copy_from_slice(weights);
    m.params[weights.len()] = 0.3;
    m
}

fn single_state() -> TransferConfig {
    TransferConfig { n_test_states: 1, max_iterations: 5000, ..Default::default() }
}

#[test]
fn product_profiles_are_reproduced_in_closed_form() {
    let weights = [0.4, -0.25, 0.1, -0.6];
    let n = weights.len();
    let model = product_model(&weights);
    let ansatz = build_sign_ansatz(n, &[(0, 1), (1, 2), (2, 3)], 2).unwrap();
    let plus = Statevector::uniform(n).unwrap();
    let report = fit_g_to_f(&model, &plus, &ansatz.layers[1].g, &single_state(), 1).unwrap();
    assert!(report.residual < 1e-6, "residual {}", report.residual);
    for q in 0..n {
        // Ry(θ)|+⟩ has amplitudes (cos, sin)(θ/2 + π/4) ∝ (f(bit 0), f(bit 1))
        let a = model.forward(0).unwrap().re;
        let b = model.forward(1 << (n - 1 - q)).unwrap().re;
        let expected = 2.0 * (b.atan2(a) - FRAC_PI_4);
        assert!((report.angles[q] - expected).abs() < 1e-3, "q={q}: {} vs {expected}", report.angles[q]);
    }
}

/// Forward KL between the model profile on `psi` and `|Ry(θ₀)⊗Ry(θ₁) psi|²`.
fn kl_two_qubits(p_f: &[f64], psi: &Statevector, t0: f64, t1: f64) -> f64 {
    let mut g = psi.clone();
    g.apply(&Gate::ry(0, t0)).unwrap();
    g.apply(&Gate::ry(1, t1)).unwrap();
    let p_g = g.probabilities();
    p_f.iter().zip(&p_g).filter(|(pf, _)| **pf > 0.0).map(|(pf, pg)| pf * (pf / pg).ln()).sum()
}

/// Two-qubit model with `f = (1, ε, ε, 1)`: four saturated tanh units act
/// as indicators of the basis states and the exponential output picks `ε`.
fn parity_profile(eps: f64) -> AmplitudeModel {
    let mut m = AmplitudeModel::zeros(2, &[4], OutputMode::NonNeg).unwrap();
    m.activation = PositiveActivation::Exp;
    let big = 20.0;
    let patterns = [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)];
    for (k, (a, b)) in patterns.iter().enumerate() {
        m.params[2 * k] = big * a;
        m.params[2 * k + 1] = big * b;
        m.params[8 + k] = -big;
    }
    // unit k is ≈ 2·[s = k] − 1, so z(s) = 2 v_s − Σ v + bias
    let v = [0.0, eps.ln() / 2.0, eps.ln() / 2.0, 0.0];
    m.params[12..16].copy_from_slice(&v);
    m.params[16] = v.iter().sum::<f64>();
    m
}

#[test]
fn parity_profile_fit_matches_grid_search() {
    let eps = 0.3;
    let model = parity_profile(eps);
    let f: Vec<f64> = model.evaluate_all().iter().map(|z| z.re).collect();
    for (got, want) in f.iter().zip([1.0, eps, eps, 1.0]) {
        assert!((got - want).abs() < 1e-12);
    }
    let psi = Statevector::uniform(2).unwrap();
    let total: f64 = f.iter().map(|x| x * x).sum();
    let p_f: Vec<f64> = f.iter().map(|x| x * x / total).collect();
    let steps = 600;
    let mut best = f64::INFINITY;
    for i in 0..steps {
        for j in 0..steps {
            let t0 = -PI + 2.0 * PI * i as f64 / steps as f64;
            let t1 = -PI + 2.0 * PI * j as f64 / steps as f64;
            best = best.min(kl_two_qubits(&p_f, &psi, t0, t1));
        }
    }
    let ansatz = build_sign_ansatz(2, &[(0, 1)], 2).unwrap();
    let report = fit_g_to_f(&model, &psi, &ansatz.layers[1].g, &single_state(), 1).unwrap();
    let fitted = kl_two_qubits(&p_f, &psi, report.angles[0], report.angles[1]);
    assert!((fitted - report.residual).abs() < 1e-10);
    assert!((fitted - best).abs() < 1e-3, "fit {fitted} grid {best}");
    // a product of single-qubit rotations cannot express the correlation
    assert!(best > 0.05, "{best}");
}

#[test]
fn fits_are_deterministic_and_non_negative() {
    let model = AmplitudeModel::random(3, &[3, 3], OutputMode::NonNeg, &mut substream(4, Stream::NnInit)).unwrap();
    let ansatz = build_sign_ansatz(3, &[(0, 1), (1, 2)], 2).unwrap();
    let psi = Statevector::random(3, &mut substream(4, Stream::Aux)).unwrap();
    let cfg = TransferConfig::default();
    let a = fit_g_to_f(&model, &psi, &ansatz.layers[1].g, &cfg, 11).unwrap();
    let b = fit_g_to_f(&model, &psi, &ansatz.layers[1].g, &cfg, 11).unwrap();
    assert_eq!(a, b);
    assert!(a.residual >= 0.0);
    let c = fit_g_to_f(&model, &psi, &ansatz.layers[1].g, &cfg, 12).unwrap();
    assert!(c.residual >= 0.0);
}

#[test]
fn constant_model_transfer_leaves_the_energy_unchanged() {
    let h = build_heisenberg_2d(1, 3, 1.0, 1.0).unwrap();
    let mut ansatz = build_sign_ansatz(3, &h.interaction_edges(), 2).unwrap();
    ansatz.randomize(&mut substream(2, Stream::CircuitInit));
    for name in ansatz.g_param_names(2).unwrap() {
        ansatz.set_param(&name, 0.0).unwrap();
    }
    for name in ansatz.w_param_names(2).unwrap() {
        ansatz.set_param(&name, 0.0).unwrap();
    }
    let mut model = AmplitudeModel::zeros(3, &[3], OutputMode::NonNeg).unwrap();
    let report = transfer_step(&mut ansatz, &mut model, 2, &h, &TransferConfig::default(), 3).unwrap();
    let (before, after) = (report.energy_before.unwrap(), report.energy_after.unwrap());
    // the reset leaves a relative spread in f below 1e-4
    assert!((after - before).abs() < 1e-3 * before.abs(), "{before} → {after}");
    assert!(report.angles.iter().all(|a| a.abs() < 1e-12));
    assert!(report.f2_spread_after.unwrap() <= report.f2_spread_before.unwrap() + 1e-6);
}

#[test]
fn factorizable_profile_transfers_without_energy_loss() {
    let h = build_tfim_1d(4, 1.0, 0.8).unwrap();
    let mut ansatz = build_sign_ansatz(4, &h.interaction_edges(), 2).unwrap();
    let mut model = product_model(&[0.3, -0.2, 0.5, 0.1]);
    let prev = ansatz.hybrid_circuit(1).unwrap().simulate().unwrap();
    let target = hybrid_energy_exact(&prev, &model, &h).unwrap().value;
    let report = transfer_step(&mut ansatz, &mut model, 2, &h, &single_state(), 5).unwrap();
    let after = report.energy_after.unwrap();
    assert!((report.energy_before.unwrap() - target).abs() < 1e-12);
    assert!((after - target).abs() < 1e-3 * target.abs(), "{target} → {after}");
    assert!(report.within_tolerance.unwrap());
    // the profile now lives in the circuit; the reset model is flat
    assert!(report.f2_spread_after.unwrap() < 1e-3);
}
