use std::time::Instant;

use indexmap::IndexMap;
use rand::Rng as _;

use super::{in_run, reference_energy, step_seed, RunConfig, RunTrace};
use crate::ansatz::{build_sign_ansatz, Circuit, SignAnsatz};
use crate::estimator::{
    build_measurement_plan, collect_shots, evaluate_shots, hybrid_energy_exact, nn_gradient_exact, nn_gradient_sampled,
    w_gradient_exact, w_gradient_sampled, EnergyEstimate, MeasurementPlan, Mode,
};
use crate::neural::{AmplitudeModel, ModelGradient, OutputMode};
use crate::optim::Adam;
use crate::pauli::Hamiltonian;
use crate::rng::{self, Stream};
use crate::transfer::transfer_step;
use crate::{Error, Result};

type StepOutput = (EnergyEstimate, ModelGradient, IndexMap<String, f64>);

/// Energy, model gradient and diagonal-block gradient at the current parameters.
fn estimate(
    config: &RunConfig,
    h: &Hamiltonian,
    circuit: &Circuit,
    model: &AmplitudeModel,
    plan: &MeasurementPlan,
    seed: u64,
) -> Result<StepOutput> {
    match config.mode {
        Mode::Exact => {
            let state = circuit.simulate()?;
            let (e, g) = nn_gradient_exact(&state, model, h)?;
            let gw = w_gradient_exact(&state, &model.evaluate_all(), plan)?;
            Ok((e, g, gw))
        }
        Mode::SampledAmplitude => {
            let state = circuit.simulate()?;
            let n_s = config.shots.samples;
            let (e, g) = nn_gradient_sampled(&state, model, h, n_s, seed)?;
            let gw = w_gradient_sampled(&state, model, plan, n_s, seed)?;
            Ok((e, g, gw))
        }
        Mode::ShotProtocol => {
            let samples = collect_shots(h.n_qubits(), &circuit.bind()?, plan, &config.shot_options(), seed)?;
            let r = evaluate_shots(plan, &samples, &model.evaluate_all(), Some(model))?;
            let g = r.nn_gradient.ok_or_else(|| Error::Estimator("missing model gradient".into()))?;
            Ok((r.energy, g, r.w_gradient))
        }
    }
}

/// Central finite differences of the exact hybrid energy with respect to
/// transferred Ry angles (used only when revisiting them).
fn g_gradient_exact(
    ansatz: &SignAnsatz,
    layer: usize,
    model: &AmplitudeModel,
    h: &Hamiltonian,
    names: &[String],
) -> Result<Vec<f64>> {
    const STEP: f64 = 1e-5;
    let energy = |a: &SignAnsatz| -> Result<f64> {
        Ok(hybrid_energy_exact(&a.hybrid_circuit(layer)?.simulate()?, model, h)?.value)
    };
    names
        .iter()
        .map(|name| {
            let v = ansatz.param(name)?;
            let mut a = ansatz.clone();
            a.set_param(name, v + STEP)?;
            let up = energy(&a)?;
            a.set_param(name, v - STEP)?;
            Ok((up - energy(&a)?) / (2.0 * STEP))
        })
        .collect()
}

fn adam_update(ansatz: &mut SignAnsatz, adam: &mut Adam, names: &[String], grad: &[f64]) -> Result<()> {
    let mut values = names.iter().map(|n| ansatz.param(n)).collect::<Result<Vec<_>>>()?;
    adam.step(&mut values, grad);
    for (n, v) in names.iter().zip(values) {
        ansatz.set_param(n, v)?;
    }
    Ok(())
}

/// Layer-by-layer hybrid optimization.
///
/// Layer 1 starts from `G_1 = H^{⊗n}` with a random diagonal block `W_1`;
/// every later layer first fits its Ry block to the current amplitude model
/// (see [`crate::transfer`]), resets the model, and starts `W_l` at zero.
/// Within a layer, the model weights and `W_l` take simultaneous Adam steps
/// until the layer's energy series converges or hits the iteration cap.
pub fn run_svqnhe(config: &RunConfig, seed: u64) -> Result<RunTrace> {
    config.validate()?;
    let h = config.model.build()?;
    let n = h.n_qubits();
    let n_layers = config.layers;
    let mut trace =
        RunTrace::new(config.run_id(seed), "svqnhe", config.model.label(), seed, config.mode, reference_energy(&h)?);

    let mut ansatz = build_sign_ansatz(n, &h.interaction_edges(), n_layers)?;
    let mut init = rng::substream(seed, Stream::CircuitInit);
    let r = config.init_range;
    for name in ansatz.w_param_names(1)? {
        ansatz.set_param(&name, init.random_range(-r..=r))?;
    }
    let mut nn_rng = rng::substream(seed, Stream::NnInit);
    let mut model = AmplitudeModel::random(n, &config.nn.hidden_for(n), OutputMode::NonNeg, &mut nn_rng)?;
    model.activation = config.nn.activation;

    let conv = config.convergence();
    let mut step = 0u64;
    for l in 1..=n_layers {
        if l >= 2 {
            let tseed = rng::splitmix64(seed.wrapping_add(l as u64));
            let report = in_run(l, 0, transfer_step(&mut ansatz, &mut model, l, &h, &config.transfer, tseed))?;
            trace.transfers.push(report);
        }
        if l == n_layers && config.nn.complex_final_layer {
            model = model.into_complex()?;
        }
        let w_names = ansatz.w_param_names(l)?;
        let g_names: Vec<String> = if config.revisit_g {
            (2..=l).map(|k| ansatz.g_param_names(k)).collect::<Result<Vec<_>>>()?.concat()
        } else {
            Vec::new()
        };
        let plan = in_run(l, 0, build_measurement_plan(&h, &ansatz, l))?;
        let mut adam_nn = Adam::new(config.nn.lr);
        let mut adam_w = Adam::new(config.circuit_lr);
        let mut adam_g = Adam::new(config.circuit_lr);
        let mut energies = Vec::new();
        for it in 1..=config.max_iterations {
            let t0 = Instant::now();
            step += 1;
            let circuit = ansatz.hybrid_circuit(l)?;
            let (est, g_nn, g_w) = in_run(l, it, estimate(config, &h, &circuit, &model, &plan, step_seed(seed, step)))?;
            trace.push(l, &est, plan.circuit_count, t0.elapsed().as_secs_f64() * 1e3);
            energies.push(est.value);
            if !est.value.is_finite() || !g_nn.is_finite() {
                return Err(Error::Run {
                    layer: l,
                    iteration: it,
                    source: Box::new(Error::Estimator("non-finite energy or gradient".into())),
                });
            }
            if conv.reached(&energies) || it == config.max_iterations {
                break;
            }
            let g_g = if g_names.is_empty() {
                Vec::new()
            } else {
                in_run(l, it, g_gradient_exact(&ansatz, l, &model, &h, &g_names))?
            };
            adam_nn.lr = config.lr_at(config.nn.lr, it);
            adam_w.lr = config.lr_at(config.circuit_lr, it);
            adam_g.lr = adam_w.lr;
            adam_nn.step(&mut model.params, &g_nn.values);
            let gw: Vec<f64> = w_names.iter().map(|k| g_w.get(k).copied().unwrap_or(0.0)).collect();
            adam_update(&mut ansatz, &mut adam_w, &w_names, &gw)?;
            if !g_names.is_empty() {
                adam_update(&mut ansatz, &mut adam_g, &g_names, &g_g)?;
            }
        }
    }
    let state = ansatz.hybrid_circuit(n_layers)?.simulate()?;
    let exact = hybrid_energy_exact(&state, &model, &h)?.value;
    trace.finish(n_layers, config.target_fraction, Some(exact));
    Ok(trace)
}
