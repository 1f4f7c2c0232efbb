//! Hybrid energy estimation `⟨ψ|F H F|ψ⟩ / ⟨ψ|F F|ψ⟩` and its gradients.
//!
//! Three modes share [`EnergyEstimate`]:
//! - exact: direct statevector arithmetic;
//! - sampled amplitude: basis samples from `|⟨s|ψ⟩|²` with amplitude ratios
//!   read from the simulator (sampling statistics without hardware limits);
//! - shot protocol: only measurement outcomes of the circuits listed in a
//!   [`MeasurementPlan`].

mod exact;
mod gradient;
mod plan;
mod qwc;
mod sampled;
mod shots;

pub use exact::{hybrid_amplitudes, hybrid_pauli_expectations, hybrid_energy_exact, hybrid_energy_exact_f, nn_gradient_exact, w_gradient_exact};
pub use gradient::{param_shift_gradient, PARAM_SHIFT};
pub use plan::{
    build_measurement_plan, build_plan_for_block, qwc_groups, vqe_circuits_per_iteration, MeasurementBasis,
    MeasurementPlan, PlannedTerm, ShiftedTerm,
};
pub use qwc::{qwc_energy_shots, qwc_term_expectations};
pub use sampled::{hybrid_energy_sampled, nn_gradient_sampled, w_gradient_sampled, SampleBatch, MIN_SAMPLES};
pub use shots::{collect_shots, evaluate_shots, hybrid_energy_shots, term_expectations_shots, ShotOptions, ShotResult, ShotSamples};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Number of jackknife blocks for sampled estimates.
pub const JACKKNIFE_BLOCKS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exact,
    SampledAmplitude,
    ShotProtocol,
}

impl Mode {
    /// The serialized name, e.g. `shot_protocol`.
    pub fn label(&self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::SampledAmplitude => "sampled_amplitude",
            Mode::ShotProtocol => "shot_protocol",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyEstimate {
    pub value: f64,
    pub std_error: f64,
    pub n_shots_used: u64,
    pub mode: Mode,
}

impl EnergyEstimate {
    pub fn exact(value: f64) -> Self {
        Self { value, std_error: 0.0, n_shots_used: 0, mode: Mode::Exact }
    }
}

/// `std / |mean|` with the population standard deviation.
pub fn cv_statistic(series: &[f64]) -> Result<f64> {
    if series.len() < 2 {
        return Err(Error::Statistic(format!("need at least 2 values, got {}", series.len())));
    }
    let n = series.len() as f64;
    let mean = series.iter().sum::<f64>() / n;
    if mean == 0.0 {
        return Err(Error::Statistic("zero mean".into()));
    }
    let var = series.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    Ok(var.sqrt() / mean.abs())
}

/// Delete-one-block jackknife of a statistic.
///
/// `full` is the statistic on all data and `leave_out[j]` the statistic with
/// block `j` removed. Returns `(bias-corrected estimate, standard error)`.
pub(crate) fn jackknife(full: f64, leave_out: &[f64]) -> (f64, f64) {
    let b = leave_out.len() as f64;
    let mean = leave_out.iter().sum::<f64>() / b;
    let var = (b - 1.0) / b * leave_out.iter().map(|x| (x - mean).powi(2)).sum::<f64>();
    (b * full - (b - 1.0) * mean, var.sqrt())
}

/// Sums of a per-sample quantity over `JACKKNIFE_BLOCKS` contiguous blocks.
#[derive(Debug, Clone)]
pub(crate) struct BlockSums {
    pub sums: Vec<f64>,
    pub counts: Vec<f64>,
}

impl BlockSums {
    pub fn from_values(values: &[f64]) -> Self {
        let mut sums = vec![0.0; JACKKNIFE_BLOCKS];
        let mut counts = vec![0.0; JACKKNIFE_BLOCKS];
        let n = values.len();
        for (i, v) in values.iter().enumerate() {
            let b = i * JACKKNIFE_BLOCKS / n.max(1);
            sums[b] += v;
            counts[b] += 1.0;
        }
        Self { sums, counts }
    }

    pub fn mean(&self) -> f64 {
        self.sums.iter().sum::<f64>() / self.counts.iter().sum::<f64>()
    }

    /// Mean without block `j`.
    pub fn mean_without(&self, j: usize) -> f64 {
        (self.sums.iter().sum::<f64>() - self.sums[j]) / (self.counts.iter().sum::<f64>() - self.counts[j])
    }
}
