use serde::{Deserialize, Serialize};

use super::RunTrace;
use crate::{Error, Result};

/// Aggregate statistics of a set of runs, optionally relative to a baseline set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub n_runs: usize,
    /// Mean absolute error of the final energies against the oracle `E0`.
    pub mae: f64,
    /// Sample variance of the final energies (`None` for a single run).
    pub var: Option<f64>,
    pub baseline_mae: Option<f64>,
    pub baseline_var: Option<f64>,
    /// `(MAE₁ − MAE₀)/MAE₀`.
    pub r_mae: Option<f64>,
    /// `(Var₁ − Var₀)/Var₀`.
    pub r_var: Option<f64>,
    /// Fraction of runs whose energy reached the target at some iteration.
    pub success_probability: f64,
    /// Median steps-to-target over the successful runs.
    pub median_steps: Option<f64>,
    /// MaxCut approximation ratio, when applicable.
    pub r_e: Option<f64>,
}

/// `(v1 − v0)/v0`; a zero baseline is an error.
pub fn relative_change(v1: f64, v0: f64) -> Result<f64> {
    if v0 == 0.0 || !v0.is_finite() {
        return Err(Error::Statistic(format!("baseline value {v0} cannot normalize a relative change")));
    }
    Ok((v1 - v0) / v0)
}

pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let k = v.len();
    Some(if k % 2 == 1 { v[k / 2] } else { 0.5 * (v[k / 2 - 1] + v[k / 2]) })
}

fn final_errors(traces: &[RunTrace]) -> Result<Vec<f64>> {
    traces
        .iter()
        .map(|t| {
            t.e0.map(|e0| (t.final_energy - e0).abs())
                .ok_or_else(|| Error::Statistic(format!("run {} has no reference energy", t.run_id)))
        })
        .collect()
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn sample_variance(v: &[f64]) -> Option<f64> {
    if v.len() < 2 {
        return None;
    }
    let m = mean(v);
    Some(v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64)
}

fn steps_to_target(t: &RunTrace, target_fraction: f64) -> Option<usize> {
    let target = RunTrace::target_energy(t.e0?, target_fraction);
    t.records.iter().find(|r| r.energy <= target).map(|r| r.iteration)
}

/// Metrics of `traces`, relative to `baseline` when given.
///
/// Errors when a run lacks a reference energy, when either side is empty, or
/// when a baseline MAE/Var of zero (or a missing baseline Var) would make the
/// relative metrics undefined.
pub fn compute_metrics(
    traces: &[RunTrace],
    baseline: Option<&[RunTrace]>,
    target_fraction: f64,
) -> Result<MetricsReport> {
    if traces.is_empty() {
        return Err(Error::Statistic("no runs to summarize".into()));
    }
    let errors = final_errors(traces)?;
    let finals: Vec<f64> = traces.iter().map(|t| t.final_energy).collect();
    let mae = mean(&errors);
    let var = sample_variance(&finals);
    let steps: Vec<f64> = traces.iter().filter_map(|t| steps_to_target(t, target_fraction)).map(|s| s as f64).collect();
    let mut report = MetricsReport {
        n_runs: traces.len(),
        mae,
        var,
        baseline_mae: None,
        baseline_var: None,
        r_mae: None,
        r_var: None,
        success_probability: steps.len() as f64 / traces.len() as f64,
        median_steps: median(&steps),
        r_e: None,
    };
    if let Some(base) = baseline {
        if base.is_empty() {
            return Err(Error::Statistic("empty baseline".into()));
        }
        let b_mae = mean(&final_errors(base)?);
        let b_var = sample_variance(&base.iter().map(|t| t.final_energy).collect::<Vec<_>>());
        report.baseline_mae = Some(b_mae);
        report.baseline_var = b_var;
        report.r_mae = Some(relative_change(mae, b_mae)?);
        report.r_var = match (var, b_var) {
            (Some(v1), Some(v0)) => Some(relative_change(v1, v0)?),
            _ => return Err(Error::Statistic("R_Var needs at least two runs per side".into())),
        };
    }
    Ok(report)
}
