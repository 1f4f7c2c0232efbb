use std::time::Instant;

use super::{in_run, reference_energy, step_seed, AnsatzSpec, Method, RunConfig, RunTrace};
use crate::ansatz::{build_brickwork, build_hea, build_qaoa, build_sign_ansatz, Angle, Circuit};
use crate::estimator::{
    hybrid_energy_exact, nn_gradient_exact, nn_gradient_sampled, param_shift_gradient, qwc_energy_shots, qwc_groups,
    EnergyEstimate, Mode, ShotOptions,
};
use crate::neural::{AmplitudeModel, OutputMode};
use crate::optim::Adam;
use crate::pauli::Hamiltonian;
use crate::qsim::{Gate, Statevector};
use crate::rng::{self, Stream};
use crate::{Error, Result};

/// Plain circuit energy `⟨ψ(θ)|H|ψ(θ)⟩`, exact or from grouped shots.
pub(crate) struct CircuitObjective<'a> {
    pub h: &'a Hamiltonian,
    pub mode: Mode,
    pub opts: ShotOptions,
}

impl CircuitObjective<'_> {
    pub fn eval(&self, gates: &[Gate], seed: u64) -> Result<EnergyEstimate> {
        let n = self.h.n_qubits();
        match self.mode {
            Mode::ShotProtocol => qwc_energy_shots(n, gates, self.h, &self.opts, seed),
            _ => {
                let mut sv = Statevector::zero(n)?;
                sv.apply_all(gates)?;
                Ok(EnergyEstimate::exact(self.h.expectation(&sv)?))
            }
        }
    }
}

/// Number of parameterized gate occurrences belonging to `names`.
fn shifted_occurrences(circuit: &Circuit, names: &[String]) -> usize {
    circuit
        .gates
        .iter()
        .filter(|g| matches!(&g.angle, Angle::Param { name, .. } if names.contains(name)))
        .count()
}

pub(crate) struct StageContext<'a> {
    pub config: &'a RunConfig,
    pub objective: CircuitObjective<'a>,
    pub seed: u64,
    pub step: u64,
}

/// Adam on parameter-shift gradients of `names` until convergence or the cap;
/// records one trace entry per iteration under `layer`.
fn optimize_stage(
    ctx: &mut StageContext<'_>,
    circuit: &mut Circuit,
    names: &[String],
    layer: usize,
    trace: &mut RunTrace,
) -> Result<()> {
    let config = ctx.config;
    let groups = qwc_groups(ctx.objective.h).len();
    let cost = (2 * shifted_occurrences(circuit, names) + 1) * groups;
    let conv = config.convergence();
    let mut adam = Adam::new(config.circuit_lr);
    let mut energies = Vec::new();
    for it in 1..=config.max_iterations {
        let t0 = Instant::now();
        ctx.step += 1;
        let s = step_seed(ctx.seed, ctx.step);
        let mut est = in_run(layer, it, ctx.objective.eval(&circuit.bind()?, s))?;
        if config.mode == Mode::ShotProtocol {
            est.n_shots_used = (cost * config.shots.shots_per_basis) as u64;
        }
        trace.push(layer, &est, cost, t0.elapsed().as_secs_f64() * 1e3);
        energies.push(est.value);
        if conv.reached(&energies) || it == config.max_iterations {
            break;
        }
        let mut k = 0u64;
        let objective = &ctx.objective;
        let grad = in_run(
            layer,
            it,
            param_shift_gradient(circuit, names, |gates| {
                k += 1;
                Ok(objective.eval(gates, rng::splitmix64(s ^ k))?.value)
            }),
        )?;
        let mut values = names.iter().map(|n| circuit.param(n)).collect::<Result<Vec<_>>>()?;
        adam.lr = config.lr_at(config.circuit_lr, it);
        adam.step(&mut values, &grad);
        for (n, v) in names.iter().zip(values) {
            circuit.set_param(n, v)?;
        }
    }
    Ok(())
}

fn randomize(circuit: &mut Circuit, seed: u64, range: f64) {
    let mut rng = rng::substream(seed, Stream::CircuitInit);
    circuit.randomize(&mut rng, -range, range);
}

fn exact_energy(h: &Hamiltonian, circuit: &Circuit) -> Result<f64> {
    h.expectation(&circuit.simulate()?)
}

fn run_circuit(config: &RunConfig, seed: u64, h: Hamiltonian, mut circuit: Circuit, label: &str) -> Result<RunTrace> {
    let mut trace =
        RunTrace::new(config.run_id(seed), label, config.model.label(), seed, config.mode, reference_energy(&h)?);
    randomize(&mut circuit, seed, config.init_range);
    let names = circuit.param_names();
    let mut ctx = StageContext {
        config,
        objective: CircuitObjective { h: &h, mode: config.mode, opts: config.shot_options() },
        seed,
        step: 0,
    };
    optimize_stage(&mut ctx, &mut circuit, &names, 1, &mut trace)?;
    trace.finish(1, config.target_fraction, Some(exact_energy(&h, &circuit)?));
    Ok(trace)
}

pub(crate) fn circuit_for(spec: AnsatzSpec, layers: usize, h: &Hamiltonian) -> Result<Circuit> {
    let n = h.n_qubits();
    match spec {
        AnsatzSpec::Sign => build_sign_ansatz(n, &h.interaction_edges(), layers)?.full_circuit(),
        AnsatzSpec::Hea { reps } => build_hea(n, reps),
        AnsatzSpec::Brickwork { depth } => build_brickwork(n, depth),
        AnsatzSpec::Qaoa { p } => build_qaoa(h, p),
    }
}

/// Standard VQE: every circuit parameter optimized jointly with Adam on
/// parameter-shift gradients.
pub fn run_vqe(config: &RunConfig, seed: u64) -> Result<RunTrace> {
    config.validate()?;
    let h = config.model.build()?;
    let circuit = circuit_for(config.ansatz, config.layers, &h)?;
    run_circuit(config, seed, h, circuit, Method::Vqe.label())
}

/// QAOA with depth from the `qaoa` ansatz spec, or `layers` otherwise.
pub fn run_qaoa(config: &RunConfig, seed: u64) -> Result<RunTrace> {
    config.validate()?;
    let h = config.model.build()?;
    let p = match config.ansatz {
        AnsatzSpec::Qaoa { p } => p,
        _ => config.layers,
    };
    let circuit = build_qaoa(&h, p)?;
    run_circuit(config, seed, h, circuit, Method::Qaoa.label())
}

/// Layered VQE on the sign ansatz without a network: layer `l` optimizes its
/// diagonal block and the Ry block that follows it, with earlier layers frozen.
pub fn run_layered_vqe(config: &RunConfig, seed: u64) -> Result<RunTrace> {
    config.validate()?;
    let h = config.model.build()?;
    let n = h.n_qubits();
    let mut trace = RunTrace::new(
        config.run_id(seed),
        Method::LayeredVqe.label(),
        config.model.label(),
        seed,
        config.mode,
        reference_energy(&h)?,
    );
    let mut ansatz = build_sign_ansatz(n, &h.interaction_edges(), config.layers)?;
    let mut full = ansatz.full_circuit()?;
    randomize(&mut full, seed, config.init_range);
    ansatz.update_from(&full)?;
    let mut ctx = StageContext {
        config,
        objective: CircuitObjective { h: &h, mode: config.mode, opts: config.shot_options() },
        seed,
        step: 0,
    };
    let mut last = Circuit::new(n);
    for l in 1..=config.layers {
        let mut circuit = ansatz.hybrid_circuit(l)?;
        circuit.extend(ansatz.owned_ry(l)?)?;
        let names = ansatz.layer_param_names(l)?;
        optimize_stage(&mut ctx, &mut circuit, &names, l, &mut trace)?;
        ansatz.update_from(&circuit)?;
        last = circuit;
    }
    trace.finish(config.layers, config.target_fraction, Some(exact_energy(&h, &last)?));
    Ok(trace)
}

/// Variational Monte Carlo with a real signed MLP `ψ(s) = f(s)` and no circuit.
pub fn run_nn_baseline(config: &RunConfig, seed: u64) -> Result<RunTrace> {
    config.validate()?;
    let h = config.model.build()?;
    let n = h.n_qubits();
    let mut trace = RunTrace::new(
        config.run_id(seed),
        Method::NnBaseline.label(),
        config.model.label(),
        seed,
        config.mode,
        reference_energy(&h)?,
    );
    let mut nn_rng = rng::substream(seed, Stream::NnInit);
    let mut model = AmplitudeModel::random(n, &config.nn.hidden_for(n), OutputMode::Signed, &mut nn_rng)?;
    // a uniform state turns the hybrid estimators into plain Rayleigh quotients of f
    let uniform = Statevector::uniform(n)?;
    let conv = config.convergence();
    let mut adam = Adam::new(config.nn.lr);
    let mut energies = Vec::new();
    for it in 1..=config.max_iterations {
        let t0 = Instant::now();
        let (est, grad) = in_run(
            1,
            it,
            match config.mode {
                Mode::SampledAmplitude => {
                    nn_gradient_sampled(&uniform, &model, &h, config.shots.samples, step_seed(seed, it as u64))
                }
                _ => nn_gradient_exact(&uniform, &model, &h),
            },
        )?;
        trace.push(1, &est, 0, t0.elapsed().as_secs_f64() * 1e3);
        energies.push(est.value);
        if !est.value.is_finite() || !grad.is_finite() {
            return Err(Error::Run {
                layer: 1,
                iteration: it,
                source: Box::new(Error::Estimator("non-finite energy or gradient".into())),
            });
        }
        if conv.reached(&energies) || it == config.max_iterations {
            break;
        }
        adam.lr = config.lr_at(config.nn.lr, it);
        adam.step(&mut model.params, &grad.values);
    }
    let exact = hybrid_energy_exact(&uniform, &model, &h)?.value;
    trace.finish(1, config.target_fraction, Some(exact));
    Ok(trace)
}
