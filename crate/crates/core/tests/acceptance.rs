//! Acceptance suite: prints one PASS/FAIL line per criterion.
//!
//! The binary exits successfully even when a criterion fails so that the
//! report is always produced; set `SVQNHE_ACCEPTANCE_STRICT=1` to turn any
//! FAIL into a non-zero exit. `SVQNHE_ACCEPTANCE_ONLY=1,4,8` restricts the
//! run to the listed criteria.

mod common;

use std::time::Instant;

use common::*;
use nalgebra::DMatrix;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use svqnhe::ansatz::{build_brickwork, build_hea, build_sign_ansatz, Circuit};
use svqnhe::driver::{
    compute_metrics, run_maxcut, run_seeds, AnsatzSpec, MaxCutConfig, MaxCutMethod, Method, RunConfig, RunTrace,
};
use svqnhe::estimator::{
    build_measurement_plan, build_plan_for_block, hybrid_energy_exact, hybrid_energy_exact_f, hybrid_energy_sampled,
    hybrid_energy_shots, nn_gradient_exact, param_shift_gradient, Mode,
};
use svqnhe::liealg::compare_generator_sets;
use svqnhe::neural::{AmplitudeModel, OutputMode, PositiveActivation};
use svqnhe::pauli::{
    brute_force_maxcut, build_heisenberg_2d, build_ising_1d, build_j1j2_1d, build_tfim_1d, erdos_renyi,
    ground_state_lanczos, Hamiltonian, MaxCutEncoding, ModelSpec, Pauli, PauliString,
};
use svqnhe::qsim::{Gate, GateKind, NoiseSpec, Statevector};
use svqnhe::rng::{substream, Stream};
use svqnhe::C64;

// ---- pinned tolerances -------------------------------------------------------

/// Fast path against dense oracle (criterion 1).
const ORACLE_TOL: f64 = 1e-10;
/// Dense against matrix-free ground energies (criterion 1).
const GROUND_TOL: f64 = 1e-8;
/// Largest width of the dense/matrix-free comparison (criterion 1).
const GROUND_MAX_QUBITS: usize = 12;
/// Relative agreement of analytic and finite-difference gradients (criterion 2).
const GRAD_REL_TOL: f64 = 1e-5;
/// Gradients smaller than this are compared in absolute terms (criterion 2).
const GRAD_FLOOR: f64 = 1e-3;
const FD_STEP: f64 = 1e-5;
const MIN_GRAD_INSTANCES: usize = 20;
/// Estimator agreement in units of the reported standard error (criterion 3).
const SIGMA_BOUND: f64 = 5.0;
/// Allowed deviation of successive std-error ratios from √10 (criterion 3).
const SCALING_FACTOR: f64 = 1.5;
/// Relative-metric bounds for the 6-qubit comparison (criterion 6).
const R_MAE_MAX: f64 = -0.9;
const R_VAR_MAX: f64 = -0.9;
/// Required advantage in median steps and success fraction (criterion 7).
const STEP_RATIO_MIN: f64 = 5.0;
const SUCCESS_RATIO_MIN: f64 = 3.0;
/// Seeds out of ten whose layer-2 CV must beat layer 1 (criterion 8).
const CV_WINS_MIN: usize = 7;
/// Slack below the oracle ground energy (criterion 10).
const BOUND_SLACK: f64 = 1e-8;

// ---- pinned run settings -----------------------------------------------------

const TABLE_SEEDS: u64 = 20;
const TABLE_STEPS: usize = 2000;
const ROBUSTNESS_SEEDS: u64 = 10;
const MAXCUT_INSTANCES: u64 = 10;

fn j1j2_6() -> ModelSpec {
    ModelSpec::J1j2 { n: 6, j1: 1.0, j2: 0.6, delta1: 1.0, delta2: 1.0, b_h: 0.0 }
}

/// Fixed-length exact-mode run on the 6-qubit chain.
fn table_run(method: Method) -> RunConfig {
    RunConfig {
        method,
        model: j1j2_6(),
        mode: Mode::Exact,
        max_iterations: TABLE_STEPS,
        // every seed runs the full step budget
        eps_conv: Some(1e-12),
        seeds: (0..TABLE_SEEDS).collect(),
        ..Default::default()
    }
}

/// Hybrid settings with the lowest final error found for the 6-qubit chain.
fn hybrid_for_accuracy() -> RunConfig {
    let mut c = table_run(Method::Svqnhe);
    c.nn.activation = PositiveActivation::Exp;
    c.nn.lr = 0.002;
    c.circuit_lr = 0.1;
    c
}

/// Hybrid settings with the fastest approach to the target.
fn hybrid_for_speed() -> RunConfig {
    let mut c = table_run(Method::Svqnhe);
    c.nn.activation = PositiveActivation::Exp;
    c.nn.lr = 0.01;
    c.circuit_lr = 0.3;
    c
}

fn nn_baseline() -> RunConfig {
    table_run(Method::NnBaseline)
}

fn hea2_vqe() -> RunConfig {
    RunConfig { ansatz: AnsatzSpec::Hea { reps: 2 }, circuit_lr: 0.05, ..table_run(Method::Vqe) }
}

fn robustness_run(mode: Mode, noise: NoiseSpec) -> RunConfig {
    RunConfig {
        model: ModelSpec::Heisenberg2d { rows: 1, cols: 3, h: 1.0, j: 1.0 },
        layers: 2,
        mode,
        noise,
        max_iterations: 400,
        seeds: (0..ROBUSTNESS_SEEDS).collect(),
        ..Default::default()
    }
}

// ---- reporting ---------------------------------------------------------------

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

/// Exact-mode traces collected along the way for criterion 10.
#[derive(Default)]
struct Collected {
    exact: Vec<RunTrace>,
    other: Vec<RunTrace>,
}

impl Collected {
    fn add(&mut self, traces: &[RunTrace]) {
        for t in traces {
            if t.mode == Mode::Exact {
                self.exact.push(t.clone());
            } else {
                self.other.push(t.clone());
            }
        }
    }
}

fn runs(cfg: &RunConfig, store: &mut Collected) -> Vec<RunTrace> {
    let traces = run_seeds(cfg).expect("acceptance run failed");
    store.add(&traces);
    traces
}

// ---- criterion 1 ---------------------------------------------------------------

fn oracle_models() -> Vec<Hamiltonian> {
    vec![
        build_j1j2_1d(4, 1.0, 0.6, 1.0, 1.0, 0.0).unwrap(),
        build_j1j2_1d(4, 1.0, 0.4, 0.7, 1.3, 0.2).unwrap(),
        build_heisenberg_2d(2, 2, 0.5, 1.0).unwrap(),
        build_tfim_1d(4, 1.0, 0.8).unwrap(),
        build_ising_1d(3, 1.0, 0.3).unwrap(),
    ]
}

fn real_lowest_eigenvalue(h: &Hamiltonian) -> f64 {
    let m: DMatrix<f64> = hamiltonian_matrix(h).map(|z| z.re);
    m.symmetric_eigenvalues().min()
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst: f64 = 0.0;
    for n in 2..=4 {
        for _ in 0..20 {
            let gates: Vec<Gate> = (0..15).map(|_| random_gate(n, &mut rng)).collect();
            let mut sv = Statevector::zero(n).unwrap();
            sv.apply_all(&gates).unwrap();
            worst = worst.max(max_abs_diff(sv.amplitudes(), (circuit_matrix(n, &gates) * zero_vector(n)).as_slice()));
        }
    }
    let ops = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    let mut conj_fail = 0;
    for _ in 0..200 {
        let a: Vec<Pauli> = (0..3).map(|_| ops[rng.random_range(0..4)]).collect();
        let b: Vec<Pauli> = (0..3).map(|_| ops[rng.random_range(0..4)]).collect();
        let (a, b) = (PauliString::from_ops(&a).unwrap(), PauliString::from_ops(&b).unwrap());
        let diff = pauli_matrix(&a.multiply(&b).unwrap()) - pauli_matrix(&a) * pauli_matrix(&b);
        worst = worst.max(diff.iter().map(|z| z.norm()).fold(0.0, f64::max));
        let conj = pauli_matrix(&b) * pauli_matrix(&a) * pauli_matrix(&b).adjoint();
        let sign = if a.commutes_with(&b).unwrap() { 1.0 } else { -1.0 };
        let d = (conj - pauli_matrix(&a) * C64::new(sign, 0.0)).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if d > ORACLE_TOL {
            conj_fail += 1;
        }
    }
    let mut srng = substream(101, Stream::Aux);
    for h in oracle_models() {
        let n = h.n_qubits();
        let m = hamiltonian_matrix(&h);
        for _ in 0..5 {
            let sv = Statevector::random(n, &mut srng).unwrap();
            worst = worst.max((h.expectation(&sv).unwrap() - rayleigh(&m, &vector(&sv))).abs());
            let f: Vec<C64> = (0..1 << n).map(|_| C64::new(srng.random_range(0.1..2.0), 0.0)).collect();
            let phi = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(f.clone())) * vector(&sv);
            worst = worst.max((hybrid_energy_exact_f(&sv, &f, &h).unwrap() - rayleigh(&m, &phi)).abs());
        }
    }
    let p = 0.3;
    let sv = Statevector::random(2, &mut srng).unwrap();
    for q in 0..2 {
        let mut avg = DMatrix::<C64>::zeros(4, 4);
        for (kind, w) in [(None, 1.0 - 0.75 * p), (Some(GateKind::X), p / 4.0), (Some(GateKind::Y), p / 4.0), (Some(GateKind::Z), p / 4.0)] {
            let mut b = sv.clone();
            if let Some(k) = kind {
                b.apply(&Gate::fixed(k, q)).unwrap();
            }
            let v = vector(&b);
            avg += &v * v.adjoint() * C64::new(w, 0.0);
        }
        let v = vector(&sv);
        let channel = depolarize(&(&v * v.adjoint()), 2, q, p);
        worst = worst.max((avg - channel).iter().map(|z| z.norm()).fold(0.0, f64::max));
    }

    let mut ground: Vec<Hamiltonian> = oracle_models();
    ground.push(build_j1j2_1d(6, 1.0, 0.6, 1.0, 1.0, 0.0).unwrap());
    ground.push(build_tfim_1d(8, 1.0, 1.0).unwrap());
    ground.push(build_j1j2_1d(10, 1.0, 0.5, 1.0, 1.0, 0.0).unwrap());
    ground.push(build_heisenberg_2d(3, GROUND_MAX_QUBITS / 3, 1.0, 1.0).unwrap());
    let mut ground_worst: f64 = 0.0;
    for h in &ground {
        let dense = real_lowest_eigenvalue(h);
        let (lanczos, _) = ground_state_lanczos(h).unwrap();
        ground_worst = ground_worst.max((dense - lanczos).abs());
    }
    Outcome::new(
        worst <= ORACLE_TOL && conj_fail == 0 && ground_worst <= GROUND_TOL,
        format!(
            "fast paths max |Δ| {worst:.1e} (tol {ORACLE_TOL:.0e}), conjugation mismatches {conj_fail}; \
             ground energies n≤{GROUND_MAX_QUBITS} max |Δ| {ground_worst:.1e} (tol {GROUND_TOL:.0e})"
        ),
    )
}

// ---- criterion 2 ---------------------------------------------------------------

fn circuit_energy(n: usize, gates: &[Gate], h: &Hamiltonian) -> f64 {
    let mut sv = Statevector::zero(n).unwrap();
    sv.apply_all(gates).unwrap();
    h.expectation(&sv).unwrap()
}

fn grad_models(n: usize) -> Vec<Hamiltonian> {
    match n {
        2 => vec![build_heisenberg_2d(1, 2, 0.3, 1.0).unwrap(), build_tfim_1d(2, 1.0, 0.7).unwrap()],
        3 => vec![build_heisenberg_2d(1, 3, 1.0, 1.0).unwrap(), build_tfim_1d(3, 1.0, 1.2).unwrap()],
        _ => vec![build_j1j2_1d(n, 1.0, 0.6, 1.0, 1.0, 0.0).unwrap(), build_tfim_1d(n, 1.0, 0.9).unwrap()],
    }
}

/// Relative error with the pinned absolute floor.
fn grad_error(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(GRAD_FLOOR)
}

fn criterion_2() -> Outcome {
    let mut rng = substream(202, Stream::Aux);
    let (mut shift_instances, mut shift_worst) = (0, 0.0f64);
    for n in 2..=4 {
        for h in grad_models(n) {
            for reps in 1..=2 {
                for mut c in [build_hea(n, reps).unwrap(), build_brickwork(n, reps).unwrap()] {
                    c.randomize(&mut rng, -3.0, 3.0);
                    let names = c.param_names();
                    let ps = param_shift_gradient(&c, &names, |g| Ok(circuit_energy(n, g, &h))).unwrap();
                    let x = c.param_values();
                    for (i, g) in ps.iter().enumerate() {
                        let fd = central_difference(&x, i, FD_STEP, |v| {
                            let mut cc: Circuit = c.clone();
                            cc.set_param_values(v).unwrap();
                            circuit_energy(n, &cc.bind().unwrap(), &h)
                        });
                        shift_worst = shift_worst.max(grad_error(*g, fd));
                    }
                    shift_instances += 1;
                }
            }
        }
    }
    let (mut nn_instances, mut nn_worst) = (0, 0.0f64);
    for n in 2..=5 {
        for h in grad_models(n) {
            for (j, mode) in [OutputMode::NonNeg, OutputMode::Signed, OutputMode::Complex].into_iter().enumerate() {
                let seed = (n * 10 + j) as u64;
                let mut model = AmplitudeModel::random(n, &[n + 1, n], mode, &mut substream(seed, Stream::NnInit)).unwrap();
                model.params.iter_mut().for_each(|p| *p *= 2.0);
                let state = Statevector::random(n, &mut substream(seed, Stream::Aux)).unwrap();
                let (_, grad) = nn_gradient_exact(&state, &model, &h).unwrap();
                let x = model.params.clone();
                for k in (0..x.len()).step_by(3) {
                    let fd = central_difference(&x, k, FD_STEP, |v| {
                        let mut m = model.clone();
                        m.params.copy_from_slice(v);
                        hybrid_energy_exact_f(&state, &m.evaluate_all(), &h).unwrap()
                    });
                    nn_worst = nn_worst.max(grad_error(grad.values[k], fd));
                }
                nn_instances += 1;
            }
        }
    }
    Outcome::new(
        shift_instances >= MIN_GRAD_INSTANCES
            && nn_instances >= MIN_GRAD_INSTANCES
            && shift_worst <= GRAD_REL_TOL
            && nn_worst <= GRAD_REL_TOL,
        format!(
            "parameter shift: {shift_instances} instances, worst rel {shift_worst:.1e}; \
             backprop: {nn_instances} instances, worst rel {nn_worst:.1e} (tol {GRAD_REL_TOL:.0e})"
        ),
    )
}

// ---- criterion 3 ---------------------------------------------------------------

fn criterion_3() -> Outcome {
    let h = build_heisenberg_2d(1, 3, 1.0, 1.0).unwrap();
    let mut ansatz = build_sign_ansatz(3, &h.interaction_edges(), 1).unwrap();
    ansatz.randomize(&mut substream(2, Stream::CircuitInit));
    let model = AmplitudeModel::default_for(3, OutputMode::NonNeg, &mut substream(2, Stream::NnInit)).unwrap();
    let circuit = ansatz.hybrid_circuit(1).unwrap();
    let state = circuit.simulate().unwrap();
    let exact = hybrid_energy_exact(&state, &model, &h).unwrap().value;
    let sizes = [1_000usize, 10_000, 100_000];
    let sampled: Vec<_> = sizes.iter().map(|&n| hybrid_energy_sampled(&state, &model, &h, n, 7).unwrap()).collect();
    let shots: Vec<_> =
        sizes.iter().map(|&n| hybrid_energy_shots(&circuit, &model, &h, n, NoiseSpec::NONE, 7).unwrap()).collect();
    let mut pass = true;
    let mut parts = Vec::new();
    for (label, series) in [("sampled", &sampled), ("shots", &shots)] {
        let last = series.last().unwrap();
        let z = (last.value - exact).abs() / last.std_error;
        let ratios: Vec<f64> = series.windows(2).map(|w| w[0].std_error / w[1].std_error).collect();
        let ok_ratio = ratios.iter().all(|r| *r > 10f64.sqrt() / SCALING_FACTOR && *r < 10f64.sqrt() * SCALING_FACTOR);
        pass &= z < SIGMA_BOUND && ok_ratio;
        parts.push(format!("{label} |Δ|/σ {z:.2}, σ ratios {:.2}/{:.2}", ratios[0], ratios[1]));
    }
    Outcome::new(pass, format!("{} (bounds {SIGMA_BOUND}σ, √10 within ×{SCALING_FACTOR})", parts.join("; ")))
}

// ---- criterion 4 ---------------------------------------------------------------

fn criterion_4() -> Outcome {
    let n = 6;
    let h = build_j1j2_1d(n, 1.0, 0.6, 1.0, 1.0, 0.0).unwrap();
    let base = build_measurement_plan(&h, &build_sign_ansatz(n, &h.interaction_edges(), 1).unwrap(), 1).unwrap();
    let (n1, n2) = (n - 1, n - 2);
    let mut w = Circuit::new(n);
    for a in 0..n {
        for b in a + 1..n {
            w.push_param(GateKind::Rzz, &[a, b], &format!("zz_{a}_{b}"), 1.0);
        }
    }
    let dense = build_plan_for_block(&h, &w).unwrap();
    let caps = [(17, 2, 408), (30, 2, 1305), (17, 3, 2040), (30, 3, 12180)];
    let caps_ok = caps.iter().all(|&(n, k, m)| MaxCutEncoding::capacity(n, k) == m);
    let got: Vec<usize> = caps.iter().map(|&(n, k, _)| MaxCutEncoding::capacity(n, k)).collect();
    Outcome::new(
        base.circuit_count == 28 && base.circuit_count == 3 * (n1 + n2) + 1 && dense.circuit_count == base.circuit_count && caps_ok,
        format!(
            "circuits/iter {} (3(n1+n2)+1 = {}); with all-pairs Rzz {}; capacities {got:?}",
            base.circuit_count,
            3 * (n1 + n2) + 1,
            dense.circuit_count
        ),
    )
}

// ---- criterion 5 ---------------------------------------------------------------

fn criterion_5() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (n, expected) in [(2usize, 6usize), (3, 30), (4, 126)] {
        let c = compare_generator_sets(n, 2).unwrap();
        pass &= c.dim_g1 == expected && c.dim_g1 == 2 * (4usize.pow(n as u32 - 1) - 1);
        if n >= 3 {
            pass &= c.dim_g2 < c.dim_g1;
        }
        parts.push(format!("n={n}: g1 {} g2 {}", c.dim_g1, c.dim_g2));
    }
    Outcome::new(pass, parts.join(", "))
}

// ---- criteria 6 and 7 ----------------------------------------------------------

fn criterion_6(store: &mut Collected) -> Outcome {
    let ours = runs(&hybrid_for_accuracy(), store);
    let base = runs(&nn_baseline(), store);
    let m = compute_metrics(&ours, Some(&base), 0.9945).unwrap();
    let (r_mae, r_var) = (m.r_mae.unwrap(), m.r_var.unwrap());
    Outcome::new(
        r_mae <= R_MAE_MAX && r_var <= R_VAR_MAX,
        format!(
            "R_MAE {r_mae:.3} (need ≤ {R_MAE_MAX}), R_Var {r_var:.3} (need ≤ {R_VAR_MAX}); \
             MAE {:.2e} vs baseline {:.2e}",
            m.mae,
            m.baseline_mae.unwrap()
        ),
    )
}

fn criterion_7(store: &mut Collected) -> Outcome {
    let ours = runs(&hybrid_for_speed(), store);
    let vqe = runs(&hea2_vqe(), store);
    let a = compute_metrics(&ours, None, 0.9945).unwrap();
    let b = compute_metrics(&vqe, None, 0.9945).unwrap();
    let step_ratio = match (a.median_steps, b.median_steps) {
        (Some(x), Some(y)) => y / x,
        (Some(_), None) => f64::INFINITY,
        _ => 0.0,
    };
    let steps = |m: Option<f64>| m.map_or("none".to_string(), |x| x.to_string());
    let success_ratio =
        if b.success_probability > 0.0 { a.success_probability / b.success_probability } else { f64::INFINITY };
    Outcome::new(
        step_ratio >= STEP_RATIO_MIN && success_ratio >= SUCCESS_RATIO_MIN,
        format!(
            "median steps {} vs {} (×{step_ratio:.2}, need ≥ {STEP_RATIO_MIN}); \
             success {:.0}% vs {:.0}% (×{success_ratio:.2}, need ≥ {SUCCESS_RATIO_MIN})",
            steps(a.median_steps),
            steps(b.median_steps),
            100.0 * a.success_probability,
            100.0 * b.success_probability
        ),
    )
}

// ---- criterion 8 ---------------------------------------------------------------

fn criterion_8(store: &mut Collected) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    let mut flattening_violations = 0;
    let settings = [
        ("sampled", robustness_run(Mode::SampledAmplitude, NoiseSpec::NONE)),
        ("noisy", robustness_run(Mode::ShotProtocol, NoiseSpec::new(0.0013, 0.005).unwrap())),
    ];
    for (label, cfg) in settings {
        let traces = runs(&cfg, store);
        let wins = traces
            .iter()
            .filter(|t| matches!((t.layer_cv[0], t.layer_cv[1]), (Some(a), Some(b)) if b < a))
            .count();
        for t in &traces {
            for tr in &t.transfers {
                if tr.f2_spread_after.unwrap() > tr.f2_spread_before.unwrap() {
                    flattening_violations += 1;
                }
            }
        }
        pass &= wins >= CV_WINS_MIN;
        parts.push(format!("{label} {wins}/{}", traces.len()));
    }
    Outcome::new(
        pass,
        format!(
            "seeds with CV(layer 2) < CV(layer 1): {} (need ≥ {CV_WINS_MIN}); f² spread increases at transfer: {flattening_violations}",
            parts.join(", ")
        ),
    )
}

// ---- criterion 9 ---------------------------------------------------------------

fn criterion_9() -> Outcome {
    let methods = [MaxCutMethod::Svqnhe, MaxCutMethod::SignVqe, MaxCutMethod::Brickwork];
    let mut sums = [0.0; 3];
    let mut cheapest = 0;
    for i in 0..MAXCUT_INSTANCES {
        let graph = erdos_renyi(9, 0.3, &mut substream(i, Stream::Graph)).unwrap();
        let cfg = MaxCutConfig { seed: i, ..Default::default() };
        let report = run_maxcut(&graph, &cfg).unwrap();
        let optimum = brute_force_maxcut(&graph).unwrap();
        let outcomes: Vec<_> = methods.iter().map(|&m| report.outcome(m).unwrap()).collect();
        for (s, o) in sums.iter_mut().zip(&outcomes) {
            *s += if optimum > 0.0 { o.cut_value / optimum } else { 1.0 };
        }
        let ours = outcomes[0].circuits_per_iter;
        if outcomes[1..].iter().all(|o| ours < o.circuits_per_iter) {
            cheapest += 1;
        }
    }
    let means: Vec<f64> = sums.iter().map(|s| s / MAXCUT_INSTANCES as f64).collect();
    Outcome::new(
        means[0] >= means[1] && means[0] >= means[2] && cheapest == MAXCUT_INSTANCES,
        format!(
            "mean R_e sVQNHE {:.4}, sign-VQE {:.4}, brickwork {:.4}; fewest circuits/iter on {cheapest}/{MAXCUT_INSTANCES}",
            means[0], means[1], means[2]
        ),
    )
}

// ---- criterion 10 --------------------------------------------------------------

fn criterion_10(store: &Collected) -> Outcome {
    let mut checked = 0;
    let mut worst = f64::INFINITY;
    for t in &store.exact {
        let e0 = t.e0.unwrap();
        for r in &t.records {
            worst = worst.min(r.energy - e0);
            checked += 1;
        }
    }
    // stochastic runs: their exact final energies obey the same bound
    for t in &store.other {
        if let (Some(e), Some(e0)) = (t.final_energy_exact, t.e0) {
            worst = worst.min(e - e0);
            checked += 1;
        }
    }
    Outcome::new(
        checked > 0 && worst >= -BOUND_SLACK,
        format!(
            "{checked} energies from {} exact and {} stochastic runs; min E − E0 = {worst:.2e} (slack {BOUND_SLACK:.0e})",
            store.exact.len(),
            store.other.len()
        ),
    )
}

fn main() {
    let only: Option<Vec<usize>> =
        std::env::var("SVQNHE_ACCEPTANCE_ONLY").ok().map(|v| v.split(',').filter_map(|s| s.trim().parse().ok()).collect());
    let strict = std::env::var("SVQNHE_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    let selected = |i: usize| only.as_ref().is_none_or(|o| o.contains(&i));
    let mut store = Collected::default();
    let names = [
        "oracle correctness",
        "gradient suite",
        "estimator consistency",
        "measurement cost",
        "Lie-algebra dimensions",
        "6-qubit J1-J2 vs NN baseline",
        "convergence efficiency vs HEA2",
        "sampling robustness",
        "MaxCut pipeline",
        "variational bound",
    ];
    let mut failures = 0;
    for (i, name) in names.iter().enumerate() {
        let id = i + 1;
        if !selected(id) {
            continue;
        }
        let start = Instant::now();
        let outcome = match id {
            1 => criterion_1(),
            2 => criterion_2(),
            3 => criterion_3(),
            4 => criterion_4(),
            5 => criterion_5(),
            6 => criterion_6(&mut store),
            7 => criterion_7(&mut store),
            8 => criterion_8(&mut store),
            9 => criterion_9(),
            _ => criterion_10(&store),
        };
        if !outcome.pass {
            failures += 1;
        }
        println!(
            "criterion {id:>2} [{name}]: {} — {} ({:.1}s)",
            if outcome.pass { "PASS" } else { "FAIL" },
            outcome.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {failures} criteria failing");
    if strict && failures > 0 {
        std::process::exit(1);
    }
}
