//! Optimization loops, convergence control and run metrics.
//!
//! Every run is described by a [`RunConfig`] and produces one [`RunTrace`] per
//! seed. All randomness of a run derives from its seed through the named
//! substreams of [`crate::rng`].

mod config;
mod maxcut;
mod metrics;
mod svqnhe;
mod trace;
mod vqe;

pub use config::{AnsatzSpec, Method, NnSpec, RunConfig, ShotSpec, SCHEMA_VERSION};
pub use maxcut::{run_maxcut, MaxCutConfig, MaxCutMethod, MaxCutOutcome, MaxCutPreset, MaxCutReport};
pub use metrics::{compute_metrics, median, relative_change, MetricsReport};
pub use svqnhe::run_svqnhe;
pub use trace::{IterationRecord, RunTrace, CV_WINDOW};
pub use vqe::{run_layered_vqe, run_nn_baseline, run_qaoa, run_vqe};

use rayon::prelude::*;

use crate::pauli::{ground_state, Hamiltonian};
use crate::{Error, Result};

/// Runs `config.method` for a single seed.
pub fn run_single(config: &RunConfig, seed: u64) -> Result<RunTrace> {
    config.validate()?;
    match config.method {
        Method::Svqnhe => run_svqnhe(config, seed),
        Method::Vqe => run_vqe(config, seed),
        Method::LayeredVqe => run_layered_vqe(config, seed),
        Method::NnBaseline => run_nn_baseline(config, seed),
        Method::Qaoa => run_qaoa(config, seed),
    }
}

/// Runs every seed of `config` in parallel; traces come back in seed order.
pub fn run_seeds(config: &RunConfig) -> Result<Vec<RunTrace>> {
    config.validate()?;
    config.seeds.par_iter().map(|&s| run_single(config, s)).collect()
}

/// Oracle ground energy used for relative errors; `None` above the
/// matrix-free solver's width.
pub(crate) fn reference_energy(h: &Hamiltonian) -> Result<Option<f64>> {
    if h.n_qubits() > crate::qsim::MAX_QUBITS {
        return Ok(None);
    }
    Ok(Some(ground_state(h)?.0))
}

/// Step-dependent seed for the estimator calls of one iteration.
pub(crate) fn step_seed(seed: u64, step: u64) -> u64 {
    crate::rng::splitmix64(seed ^ crate::rng::splitmix64(step.wrapping_add(0x5eed)))
}

pub(crate) fn in_run<T>(layer: usize, iteration: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::Run { layer, iteration, source: Box::new(e) })
}

/// Moving-average convergence test on the energies of one layer.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Convergence {
    pub eps: f64,
    pub window: usize,
    pub min_iterations: usize,
}

impl Convergence {
    /// Converged once at least `min_iterations` energies exist and the means
    /// of the last two windows differ by less than `eps`.
    pub fn reached(&self, energies: &[f64]) -> bool {
        let w = self.window.max(1);
        if energies.len() < self.min_iterations.max(2 * w) {
            return false;
        }
        let k = energies.len();
        let mean = |s: &[f64]| s.iter().sum::<f64>() / s.len() as f64;
        (mean(&energies[k - w..]) - mean(&energies[k - 2 * w..k - w])).abs() < self.eps
    }
}
