//! MaxCut through a polynomial correlator encoding: each vertex is a `k`-body
//! Pauli correlator of an `n`-qubit state and the relaxed loss
//! `Σ tanh(αc_u) tanh(αc_v)` is minimized.
//!
//! The loss is not linear in the state, but at fixed correlators its gradient
//! equals that of the effective Hamiltonian `H_eff = Σ_u (∂L/∂c_u) P_u`, so
//! every energy-gradient routine applies unchanged.

use std::f64::consts::PI;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::{in_run, step_seed, vqe::CircuitObjective, NnSpec};
use crate::ansatz::{build_brickwork, build_sign_ansatz, default_brickwork_depth, Circuit};
use crate::estimator::{
    build_measurement_plan, collect_shots, evaluate_shots, hybrid_pauli_expectations, nn_gradient_exact,
    param_shift_gradient, qwc_term_expectations, term_expectations_shots, vqe_circuits_per_iteration,
    w_gradient_exact, Mode, ShotOptions,
};
use crate::neural::{AmplitudeModel, OutputMode};
use crate::optim::Adam;
use crate::pauli::{brute_force_maxcut, cut_value, Graph, Hamiltonian, MaxCutEncoding, DEFAULT_ALPHA};
use crate::qsim::{NoiseSpec, Statevector};
use crate::rng::{self, Stream};
use crate::transfer::{transfer_step, TransferConfig};
use crate::{Error, Result};

/// Largest graph whose optimum is found by enumeration.
const BRUTE_FORCE_MAX_VERTICES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaxCutMethod {
    Svqnhe,
    /// The sign ansatz with its trailing Ry block, all parameters joint, no network.
    SignVqe,
    Brickwork,
}

impl MaxCutMethod {
    pub fn label(&self) -> &'static str {
        match self {
            MaxCutMethod::Svqnhe => "svqnhe",
            MaxCutMethod::SignVqe => "sign_vqe",
            MaxCutMethod::Brickwork => "brickwork_vqe",
        }
    }
}

/// `set2` doubles the hidden widths and the iteration budget of `set1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaxCutPreset {
    #[default]
    Set1,
    Set2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MaxCutConfig {
    pub schema: String,
    pub n_qubits: usize,
    pub k: usize,
    pub alpha: f64,
    pub methods: Vec<MaxCutMethod>,
    pub preset: MaxCutPreset,
    /// Sign-ansatz layers for sVQNHE and sign-VQE (two by default, for both).
    pub layers: usize,
    pub max_iterations: usize,
    pub nn: NnSpec,
    pub circuit_lr: f64,
    pub mode: Mode,
    pub shots_per_basis: usize,
    pub trajectories_per_basis: usize,
    pub noise: NoiseSpec,
    pub seed: u64,
    /// Brickwork depth; defaults to `⌈√m⌉` for `m` vertices.
    pub brickwork_depth: Option<usize>,
    pub init_range: f64,
    pub transfer: TransferConfig,
}

impl Default for MaxCutConfig {
    fn default() -> Self {
        Self {
            schema: super::SCHEMA_VERSION.to_string(),
            n_qubits: 3,
            k: 2,
            alpha: DEFAULT_ALPHA,
            methods: vec![MaxCutMethod::Svqnhe, MaxCutMethod::SignVqe, MaxCutMethod::Brickwork],
            preset: MaxCutPreset::Set1,
            layers: 2,
            max_iterations: 200,
            nn: NnSpec { lr: 0.02, ..NnSpec::default() },
            circuit_lr: 0.05,
            mode: Mode::Exact,
            shots_per_basis: 1200,
            trajectories_per_basis: 32,
            noise: NoiseSpec::NONE,
            seed: 0,
            brickwork_depth: None,
            init_range: 2.0 * PI,
            transfer: TransferConfig::default(),
        }
    }
}

impl MaxCutConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if self.schema != super::SCHEMA_VERSION {
            return Err(Error::Config(format!("unsupported schema `{}`", self.schema)));
        }
        if self.methods.is_empty() || self.layers == 0 || self.max_iterations == 0 {
            return bad("methods, layers and max_iterations must be non-empty / positive");
        }
        if self.mode == Mode::SampledAmplitude {
            return bad("MaxCut runs in exact or shot_protocol mode");
        }
        self.noise.validate()?;
        if !self.noise.is_noiseless() && self.mode != Mode::ShotProtocol {
            return bad("gate noise is only simulated in shot_protocol mode");
        }
        if self.mode == Mode::ShotProtocol && self.shots_per_basis < 2 {
            return bad("shots_per_basis must be at least 2");
        }
        if self.brickwork_depth == Some(0) {
            return bad("brickwork_depth must be positive");
        }
        Ok(())
    }

    fn iterations(&self) -> usize {
        match self.preset {
            MaxCutPreset::Set1 => self.max_iterations,
            MaxCutPreset::Set2 => 2 * self.max_iterations,
        }
    }

    fn hidden(&self) -> Vec<usize> {
        let h = self.nn.hidden_for(self.n_qubits);
        match self.preset {
            MaxCutPreset::Set1 => h,
            MaxCutPreset::Set2 => h.into_iter().map(|w| 2 * w).collect(),
        }
    }

    fn shot_options(&self) -> ShotOptions {
        ShotOptions {
            shots_per_basis: self.shots_per_basis,
            noise: self.noise,
            trajectories_per_basis: self.trajectories_per_basis,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxCutOutcome {
    pub method: MaxCutMethod,
    pub cut_value: f64,
    /// Cut relative to the best cut found by any method in the report.
    pub r_e: f64,
    /// Cut relative to the enumerated optimum (small graphs only).
    pub r_e_optimum: Option<f64>,
    pub circuits_per_iter: usize,
    pub final_loss: f64,
    pub assignment: Vec<i8>,
    /// Relaxed loss per iteration.
    pub losses: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxCutReport {
    pub n_vertices: usize,
    pub n_edges: usize,
    pub best_cut: f64,
    pub optimum: Option<f64>,
    pub outcomes: Vec<MaxCutOutcome>,
}

impl MaxCutReport {
    pub fn outcome(&self, method: MaxCutMethod) -> Option<&MaxCutOutcome> {
        self.outcomes.iter().find(|o| o.method == method)
    }
}

fn effective_hamiltonian(enc: &MaxCutEncoding, weights: &[f64]) -> Result<Hamiltonian> {
    let mut h = Hamiltonian::new(enc.n_qubits);
    for (p, &w) in enc.variables.iter().zip(weights) {
        h.add_term(w, *p)?;
    }
    Ok(h)
}

struct Partial {
    loss: f64,
    correlators: Vec<f64>,
    losses: Vec<f64>,
    circuits_per_iter: usize,
}

fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
}

fn run_svqnhe_maxcut(graph: &Graph, enc: &MaxCutEncoding, cfg: &MaxCutConfig) -> Result<Partial> {
    let n = enc.n_qubits;
    let seed = cfg.seed;
    let h_vars = effective_hamiltonian(enc, &vec![1.0; enc.n_vertices()])?;
    let mut ansatz = build_sign_ansatz(n, &all_pairs(n), cfg.layers)?;
    let mut init = rng::substream(seed, Stream::CircuitInit);
    for name in ansatz.w_param_names(1)? {
        ansatz.set_param(&name, init.random_range(-cfg.init_range..=cfg.init_range))?;
    }
    let mut nn_rng = rng::substream(seed, Stream::NnInit);
    let mut model = AmplitudeModel::random(n, &cfg.hidden(), OutputMode::NonNeg, &mut nn_rng)?;
    model.activation = cfg.nn.activation;

    let mut h_eff = h_vars.clone();
    let mut out = Partial { loss: f64::NAN, correlators: Vec::new(), losses: Vec::new(), circuits_per_iter: 0 };
    let mut step = 0u64;
    for l in 1..=cfg.layers {
        if l >= 2 {
            let tseed = rng::splitmix64(seed.wrapping_add(l as u64));
            in_run(l, 0, transfer_step(&mut ansatz, &mut model, l, &h_eff, &cfg.transfer, tseed))?;
        }
        let names = ansatz.w_param_names(l)?;
        let mut adam_nn = Adam::new(cfg.nn.lr);
        let mut adam_w = Adam::new(cfg.circuit_lr);
        let iters = cfg.iterations();
        for it in 1..=iters {
            step += 1;
            let s = step_seed(seed, step);
            let circuit = ansatz.hybrid_circuit(l)?;
            let f = model.evaluate_all();
            let (c, g_nn, g_w, cost) = in_run(l, it, (|| {
                match cfg.mode {
                    Mode::ShotProtocol => {
                        let plan = build_measurement_plan(&h_vars, &ansatz, l)?;
                        let samples = collect_shots(n, &circuit.bind()?, &plan, &cfg.shot_options(), s)?;
                        let c = term_expectations_shots(&plan, &samples, &f)?;
                        h_eff = effective_hamiltonian(enc, &enc.objective_gradient(graph, &c)?)?;
                        // same strings, so the same bases and outcomes serve the weighted plan
                        let plan_eff = build_measurement_plan(&h_eff, &ansatz, l)?;
                        let r = evaluate_shots(&plan_eff, &samples, &f, Some(&model))?;
                        let g = r.nn_gradient.ok_or_else(|| Error::Estimator("missing model gradient".into()))?;
                        Ok((c, g, r.w_gradient, plan.circuit_count))
                    }
                    _ => {
                        let state = circuit.simulate()?;
                        let c = hybrid_pauli_expectations(&state, &f, &enc.variables)?;
                        h_eff = effective_hamiltonian(enc, &enc.objective_gradient(graph, &c)?)?;
                        let plan = build_measurement_plan(&h_eff, &ansatz, l)?;
                        let (_, g) = nn_gradient_exact(&state, &model, &h_eff)?;
                        let gw = w_gradient_exact(&state, &f, &plan)?;
                        Ok((c, g, gw, plan.circuit_count))
                    }
                }
            })())?;
            out.loss = enc.objective(graph, &c)?;
            out.losses.push(out.loss);
            out.correlators = c;
            out.circuits_per_iter = out.circuits_per_iter.max(cost);
            if it == iters {
                break;
            }
            adam_nn.step(&mut model.params, &g_nn.values);
            let mut w = names.iter().map(|k| ansatz.param(k)).collect::<Result<Vec<_>>>()?;
            let gw: Vec<f64> = names.iter().map(|k| g_w.get(k).copied().unwrap_or(0.0)).collect();
            adam_w.step(&mut w, &gw);
            for (k, v) in names.iter().zip(w) {
                ansatz.set_param(k, v)?;
            }
        }
    }
    Ok(out)
}

fn run_circuit_maxcut(graph: &Graph, enc: &MaxCutEncoding, cfg: &MaxCutConfig, mut circuit: Circuit) -> Result<Partial> {
    let n = enc.n_qubits;
    let seed = cfg.seed;
    let h_vars = effective_hamiltonian(enc, &vec![1.0; enc.n_vertices()])?;
    let mut init = rng::substream(seed, Stream::CircuitInit);
    circuit.randomize(&mut init, -cfg.init_range, cfg.init_range);
    let names = circuit.param_names();
    let cost = vqe_circuits_per_iteration(&h_vars, &circuit);
    let mut adam = Adam::new(cfg.circuit_lr);
    let mut out = Partial { loss: f64::NAN, correlators: Vec::new(), losses: Vec::new(), circuits_per_iter: cost };
    let iters = cfg.iterations();
    for it in 1..=iters {
        let s = step_seed(seed, it as u64);
        let gates = circuit.bind()?;
        let c = in_run(1, it, match cfg.mode {
            Mode::ShotProtocol => qwc_term_expectations(n, &gates, &h_vars, &cfg.shot_options(), s),
            _ => {
                let mut sv = Statevector::zero(n)?;
                sv.apply_all(&gates)?;
                enc.variables.iter().map(|p| sv.pauli_expectation(p)).collect()
            }
        })?;
        out.loss = enc.objective(graph, &c)?;
        out.losses.push(out.loss);
        out.correlators = c.clone();
        if it == iters {
            break;
        }
        let h_eff = effective_hamiltonian(enc, &enc.objective_gradient(graph, &c)?)?;
        let objective = CircuitObjective { h: &h_eff, mode: cfg.mode, opts: cfg.shot_options() };
        let mut k = 0u64;
        let grad = in_run(
            1,
            it,
            param_shift_gradient(&circuit, &names, |g| {
                k += 1;
                Ok(objective.eval(g, rng::splitmix64(s ^ k))?.value)
            }),
        )?;
        let mut values = circuit.param_values();
        adam.step(&mut values, &grad);
        circuit.set_param_values(&values)?;
    }
    Ok(out)
}

/// Runs every configured method on `graph`, rounds the final correlators to a
/// cut and reports approximation ratios against the best cut found and, for
/// graphs of at most 20 vertices, against the enumerated optimum.
pub fn run_maxcut(graph: &Graph, cfg: &MaxCutConfig) -> Result<MaxCutReport> {
    cfg.validate()?;
    let enc = MaxCutEncoding::new(graph.n_vertices, cfg.n_qubits, cfg.k, cfg.alpha)?;
    let optimum = if graph.n_vertices <= BRUTE_FORCE_MAX_VERTICES { Some(brute_force_maxcut(graph)?) } else { None };
    let mut outcomes = Vec::new();
    for &method in &cfg.methods {
        let partial = match method {
            MaxCutMethod::Svqnhe => run_svqnhe_maxcut(graph, &enc, cfg)?,
            MaxCutMethod::SignVqe => {
                let circuit = build_sign_ansatz(cfg.n_qubits, &all_pairs(cfg.n_qubits), cfg.layers)?.full_circuit()?;
                run_circuit_maxcut(graph, &enc, cfg, circuit)?
            }
            MaxCutMethod::Brickwork => {
                let depth = cfg.brickwork_depth.unwrap_or_else(|| default_brickwork_depth(graph.n_vertices));
                run_circuit_maxcut(graph, &enc, cfg, build_brickwork(cfg.n_qubits, depth)?)?
            }
        };
        let assignment = enc.round(&partial.correlators);
        outcomes.push(MaxCutOutcome {
            method,
            cut_value: cut_value(graph, &assignment)?,
            r_e: 0.0,
            r_e_optimum: None,
            circuits_per_iter: partial.circuits_per_iter,
            final_loss: partial.loss,
            assignment,
            losses: partial.losses,
        });
    }
    let best_cut = outcomes.iter().map(|o| o.cut_value).fold(0.0, f64::max);
    for o in &mut outcomes {
        o.r_e = if best_cut > 0.0 { o.cut_value / best_cut } else { 1.0 };
        o.r_e_optimum = optimum.map(|opt| if opt > 0.0 { o.cut_value / opt } else { 1.0 });
    }
    Ok(MaxCutReport { n_vertices: graph.n_vertices, n_edges: graph.edges.len(), best_cut, optimum, outcomes })
}
