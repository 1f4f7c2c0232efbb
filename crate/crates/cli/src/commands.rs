//! Implementations behind the `gs`, `plan` and `dla` subcommands, returning
//! values or rendered text so they can be tested without spawning the binary.

use std::fmt::Write as _;

use anyhow::Context;
use svqnhe::ansatz::{build_brickwork, build_hea, build_qaoa, build_sign_ansatz};
use svqnhe::driver::{AnsatzSpec, Method, RunConfig};
use svqnhe::estimator::{build_measurement_plan, vqe_circuits_per_iteration, MeasurementPlan};
use svqnhe::liealg::compare_generator_sets;
use svqnhe::pauli::{ground_state, ground_state_dense, ground_state_lanczos, MaxCutEncoding, ModelSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Solver {
    /// Dense below the matrix-free crossover, Lanczos above.
    #[default]
    Auto,
    Dense,
    Lanczos,
}

pub fn ground_energy(model: &ModelSpec, solver: Solver) -> anyhow::Result<f64> {
    let h = model.build()?;
    let (e, _) = match solver {
        Solver::Auto => ground_state(&h)?,
        Solver::Dense => ground_state_dense(&h)?,
        Solver::Lanczos => ground_state_lanczos(&h)?,
    };
    Ok(e)
}

/// Circuit counts for one configuration.
#[derive(Debug, Clone)]
pub struct PlanSummary {
    pub method: Method,
    pub model: String,
    pub n_qubits: usize,
    /// One plan per sign-ansatz layer (hybrid methods only).
    pub layers: Vec<MeasurementPlan>,
    /// Circuits per optimizer iteration (layer 1 for layered methods).
    pub circuits_per_iter: usize,
}

pub fn plan_for(config: &RunConfig) -> anyhow::Result<PlanSummary> {
    config.validate()?;
    let h = config.model.build()?;
    let n = h.n_qubits();
    let mut layers = Vec::new();
    let circuits_per_iter = match (config.method, &config.ansatz) {
        (Method::NnBaseline, _) => 0,
        (Method::Svqnhe, _) => {
            let ansatz = build_sign_ansatz(n, &h.interaction_edges(), config.layers)?;
            for l in 1..=config.layers {
                layers.push(build_measurement_plan(&h, &ansatz, l).with_context(|| format!("layer {l}"))?);
            }
            layers[0].circuit_count
        }
        (_, spec) => {
            let circuit = match spec {
                AnsatzSpec::Sign => {
                    let ansatz = build_sign_ansatz(n, &h.interaction_edges(), config.layers)?;
                    if config.method == Method::LayeredVqe {
                        let mut c = ansatz.hybrid_circuit(1)?;
                        c.extend(ansatz.owned_ry(1)?)?;
                        c
                    } else {
                        ansatz.full_circuit()?
                    }
                }
                AnsatzSpec::Hea { reps } => build_hea(n, *reps)?,
                AnsatzSpec::Brickwork { depth } => build_brickwork(n, *depth)?,
                AnsatzSpec::Qaoa { p } => build_qaoa(&h, *p)?,
            };
            vqe_circuits_per_iteration(&h, &circuit)
        }
    };
    Ok(PlanSummary { method: config.method, model: config.model.label(), n_qubits: n, layers, circuits_per_iter })
}

fn mask_string(n: usize, mask: u64) -> String {
    (0..n).map(|q| if mask >> (n - 1 - q) & 1 == 1 { 'F' } else { '.' }).collect()
}

pub fn render_plan(summary: &PlanSummary) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "method: {}  model: {}  qubits: {}", summary.method.label(), summary.model, summary.n_qubits);
    for (i, plan) in summary.layers.iter().enumerate() {
        let _ = writeln!(
            out,
            "layer {}: {} energy terms, {} shifted strings",
            i + 1,
            plan.energy_terms.len(),
            plan.shifted_terms.len()
        );
        for (b, basis) in plan.bases.iter().enumerate() {
            let pivot = basis.pivot.map(|p| p.to_string()).unwrap_or_else(|| "-".into());
            let _ = writeln!(
                out,
                "  basis {b:>3}  flips {}  y%4={}  pivot {pivot:>2}  reads {}",
                mask_string(summary.n_qubits, basis.flip_mask),
                basis.y_class,
                basis.covered.join(" ")
            );
        }
        let _ = writeln!(out, "layer {}: {} circuits per iteration", i + 1, plan.circuit_count);
    }
    let _ = writeln!(out, "circuits per iteration: {}", summary.circuits_per_iter);
    out
}

/// Encodable MaxCut variables `m(n, k) = 3·C(n, k)` for every pair.
pub fn capacity_table(ns: &[usize], ks: &[usize]) -> String {
    let mut out = String::from("n     k     m(n,k)\n");
    for &n in ns {
        for &k in ks {
            let _ = writeln!(out, "{n:<5} {k:<5} {}", MaxCutEncoding::capacity(n, k));
        }
    }
    out
}

pub fn dla_table(ns: &[usize], m: usize) -> anyhow::Result<String> {
    let mut out = String::from("n     m     dim_g1    dim_g2    g2<g1\n");
    for &n in ns {
        let c = compare_generator_sets(n, m).with_context(|| format!("n={n}, m={m}"))?;
        let _ = writeln!(out, "{:<5} {:<5} {:<9} {:<9} {}", c.n, c.m, c.dim_g1, c.dim_g2, c.g2_smaller);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ising_chain_ground_energy() {
        let e = ground_energy(&ModelSpec::Ising1d { n: 3, j: 1.0, h: 0.0 }, Solver::Auto).unwrap();
        assert!((e + 2.0).abs() < 1e-10);
    }

    #[test]
    fn capacity_rows() {
        let t = capacity_table(&[17], &[2, 3]);
        assert!(t.contains("408") && t.contains("2040"));
    }
}
