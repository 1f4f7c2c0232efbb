use serde::{Deserialize, Serialize};

use crate::estimator::{cv_statistic, EnergyEstimate, Mode};
use crate::transfer::TransferReport;

/// Final iterations per layer entering the stabilized coefficient of variation.
pub const CV_WINDOW: usize = 50;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    /// Global 1-based iteration index.
    pub iteration: usize,
    /// 1-based layer index (always 1 for single-stage methods).
    pub layer: usize,
    pub energy: f64,
    pub std_error: f64,
    pub shots: u64,
    pub circuit_count: usize,
    /// Wall-clock time of the iteration; excluded from determinism checks.
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub run_id: String,
    pub method: String,
    pub model: String,
    pub seed: u64,
    pub mode: Mode,
    /// Oracle ground energy, when the width allows computing it.
    pub e0: Option<f64>,
    pub records: Vec<IterationRecord>,
    pub transfers: Vec<TransferReport>,
    pub final_energy: f64,
    /// Exact energy of the final parameters (equal to `final_energy` in exact mode).
    pub final_energy_exact: Option<f64>,
    /// Stabilized CV of each layer's energies (final [`CV_WINDOW`] iterations).
    pub layer_cv: Vec<Option<f64>>,
    pub shots_total: u64,
    pub circuits_per_iter: usize,
    /// First iteration whose energy reaches `target_fraction · E0`.
    pub steps_to_target: Option<usize>,
}

impl RunTrace {
    pub(crate) fn new(run_id: String, method: &str, model: String, seed: u64, mode: Mode, e0: Option<f64>) -> Self {
        Self {
            run_id,
            method: method.to_string(),
            model,
            seed,
            mode,
            e0,
            records: Vec::new(),
            transfers: Vec::new(),
            final_energy: f64::NAN,
            final_energy_exact: None,
            layer_cv: Vec::new(),
            shots_total: 0,
            circuits_per_iter: 0,
            steps_to_target: None,
        }
    }

    pub(crate) fn push(&mut self, layer: usize, estimate: &EnergyEstimate, circuit_count: usize, wall_ms: f64) {
        self.records.push(IterationRecord {
            iteration: self.records.len() + 1,
            layer,
            energy: estimate.value,
            std_error: estimate.std_error,
            shots: estimate.n_shots_used,
            circuit_count,
            wall_ms,
        });
    }

    /// Energies recorded in layer `l`, in order.
    pub fn layer_energies(&self, l: usize) -> Vec<f64> {
        self.records.iter().filter(|r| r.layer == l).map(|r| r.energy).collect()
    }

    pub fn energies(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.energy).collect()
    }

    /// Target energy `E0 + (1 − fraction)|E0|` (i.e. `fraction · E0` for negative `E0`).
    pub fn target_energy(e0: f64, fraction: f64) -> f64 {
        e0 + (1.0 - fraction) * e0.abs()
    }

    /// Fills the summary fields from the records.
    pub(crate) fn finish(&mut self, n_layers: usize, target_fraction: f64, final_energy_exact: Option<f64>) {
        self.final_energy = self.records.last().map_or(f64::NAN, |r| r.energy);
        self.final_energy_exact = final_energy_exact;
        self.shots_total = self.records.iter().map(|r| r.shots).sum();
        self.circuits_per_iter = self.records.iter().map(|r| r.circuit_count).max().unwrap_or(0);
        self.layer_cv = (1..=n_layers)
            .map(|l| {
                let e = self.layer_energies(l);
                let tail = &e[e.len().saturating_sub(CV_WINDOW)..];
                if tail.len() < 2 {
                    None
                } else {
                    cv_statistic(tail).ok()
                }
            })
            .collect();
        self.steps_to_target = self.e0.and_then(|e0| {
            let target = Self::target_energy(e0, target_fraction);
            self.records.iter().find(|r| r.energy <= target).map(|r| r.iteration)
        });
    }

    /// Trace equality ignoring wall-clock timings.
    pub fn same_trajectory(&self, other: &RunTrace) -> bool {
        let strip = |t: &RunTrace| {
            let mut t = t.clone();
            t.records.iter_mut().for_each(|r| r.wall_ms = 0.0);
            t
        };
        strip(self) == strip(other)
    }
}
