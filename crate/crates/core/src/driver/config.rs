use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::Convergence;
use crate::estimator::{Mode, ShotOptions};
use crate::neural::PositiveActivation;
use crate::pauli::ModelSpec;
use crate::qsim::NoiseSpec;
use crate::transfer::TransferConfig;
use crate::{Error, Result};

pub const SCHEMA_VERSION: &str = "v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Hybrid sign-circuit + amplitude-network optimizer with layer transfer.
    Svqnhe,
    /// All circuit parameters optimized jointly.
    Vqe,
    /// Sign-ansatz layers optimized one at a time, earlier layers frozen, no network.
    LayeredVqe,
    /// Real signed MLP wavefunction, no circuit.
    NnBaseline,
    Qaoa,
}

impl Method {
    pub fn label(&self) -> &'static str {
        match self {
            Method::Svqnhe => "svqnhe",
            Method::Vqe => "vqe",
            Method::LayeredVqe => "layered_vqe",
            Method::NnBaseline => "nn_baseline",
            Method::Qaoa => "qaoa",
        }
    }
}

/// Circuit family for the circuit-only methods. The sign ansatz takes its
/// depth from [`RunConfig::layers`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AnsatzSpec {
    #[default]
    Sign,
    Hea {
        reps: usize,
    },
    Brickwork {
        depth: usize,
    },
    Qaoa {
        p: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NnSpec {
    /// Hidden layer widths; `None` means two hidden layers of width `n`.
    pub hidden: Option<Vec<usize>>,
    pub activation: PositiveActivation,
    pub lr: f64,
    /// Switch the amplitude model to complex output in the final layer.
    pub complex_final_layer: bool,
}

impl Default for NnSpec {
    fn default() -> Self {
        Self { hidden: None, activation: PositiveActivation::Softplus, lr: 0.01, complex_final_layer: false }
    }
}

impl NnSpec {
    pub fn hidden_for(&self, n: usize) -> Vec<usize> {
        self.hidden.clone().unwrap_or_else(|| vec![n, n])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ShotSpec {
    /// Basis samples per estimate in sampled-amplitude mode.
    pub samples: usize,
    /// Shots per measured circuit in shot-protocol mode.
    pub shots_per_basis: usize,
    pub trajectories_per_basis: usize,
}

impl Default for ShotSpec {
    fn default() -> Self {
        Self { samples: 1000, shots_per_basis: 1000, trajectories_per_basis: 32 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub schema: String,
    pub id: Option<String>,
    pub method: Method,
    pub model: ModelSpec,
    pub ansatz: AnsatzSpec,
    /// Sign-ansatz layers `L` (QAOA depth when `method` is `qaoa` and the
    /// ansatz is not given explicitly).
    pub layers: usize,
    pub mode: Mode,
    pub noise: NoiseSpec,
    /// Iteration cap per layer.
    pub max_iterations: usize,
    pub min_iterations: usize,
    /// Energy-change threshold; defaults to 1e-6 (exact) or 1e-3 (sampled).
    pub eps_conv: Option<f64>,
    /// Moving-average window; defaults to 1 (exact) or 10 (sampled).
    pub conv_window: Option<usize>,
    pub seeds: Vec<u64>,
    pub nn: NnSpec,
    pub circuit_lr: f64,
    pub shots: ShotSpec,
    pub transfer: TransferConfig,
    /// Keep optimizing earlier transferred Ry blocks (exact mode only).
    pub revisit_g: bool,
    /// Initial circuit parameters are drawn from `U(−init_range, init_range)`.
    pub init_range: f64,
    /// Fraction of the ground energy that counts as success.
    pub target_fraction: f64,
    /// Learning rates decay geometrically to this fraction of their initial
    /// value over each layer's iteration cap (1 = constant).
    pub lr_final_fraction: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            schema: SCHEMA_VERSION.to_string(),
            id: None,
            method: Method::Svqnhe,
            model: ModelSpec::Heisenberg2d { rows: 1, cols: 3, h: 1.0, j: 1.0 },
            ansatz: AnsatzSpec::Sign,
            layers: 1,
            mode: Mode::Exact,
            noise: NoiseSpec::NONE,
            max_iterations: 400,
            min_iterations: 50,
            eps_conv: None,
            conv_window: None,
            seeds: vec![0],
            nn: NnSpec::default(),
            circuit_lr: 0.05,
            shots: ShotSpec::default(),
            transfer: TransferConfig::default(),
            revisit_g: false,
            init_range: 2.0 * PI,
            target_fraction: 0.9945,
            lr_final_fraction: 1.0,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.schema != SCHEMA_VERSION {
            return bad(format!("unsupported schema `{}` (expected `{SCHEMA_VERSION}`)", self.schema));
        }
        if self.layers == 0 || self.max_iterations == 0 || self.seeds.is_empty() {
            return bad("layers, max_iterations and seeds must be non-empty / positive".into());
        }
        if let Some(e) = self.eps_conv {
            if !(e > 0.0) {
                return bad(format!("eps_conv must be positive, got {e}"));
            }
        }
        if self.conv_window == Some(0) {
            return bad("conv_window must be positive".into());
        }
        if !(self.nn.lr > 0.0 && self.circuit_lr > 0.0) {
            return bad("learning rates must be positive".into());
        }
        if !(self.init_range >= 0.0 && self.init_range.is_finite()) {
            return bad("init_range must be finite and non-negative".into());
        }
        if !(self.target_fraction > 0.0 && self.target_fraction <= 1.0) {
            return bad("target_fraction must lie in (0, 1]".into());
        }
        if !(self.lr_final_fraction > 0.0 && self.lr_final_fraction <= 1.0) {
            return bad("lr_final_fraction must lie in (0, 1]".into());
        }
        if self.nn.hidden.as_ref().is_some_and(|h| h.iter().any(|&w| w == 0)) {
            return bad("hidden widths must be positive".into());
        }
        self.noise.validate()?;
        if !self.noise.is_noiseless() && self.mode != Mode::ShotProtocol {
            return bad("gate noise is only simulated in shot_protocol mode".into());
        }
        match self.mode {
            Mode::SampledAmplitude if self.shots.samples < crate::estimator::MIN_SAMPLES => {
                return bad(format!("shots.samples must be at least {}", crate::estimator::MIN_SAMPLES));
            }
            Mode::ShotProtocol if self.shots.shots_per_basis < 2 || self.shots.trajectories_per_basis == 0 => {
                return bad("shot_protocol needs shots_per_basis >= 2 and trajectories_per_basis >= 1".into());
            }
            _ => {}
        }
        match self.method {
            Method::Svqnhe => {
                if self.ansatz != AnsatzSpec::Sign {
                    return bad("svqnhe runs on the sign ansatz".into());
                }
                if self.nn.complex_final_layer && self.mode == Mode::ShotProtocol {
                    return bad("the shot protocol needs a real amplitude model".into());
                }
                if self.revisit_g && self.mode != Mode::Exact {
                    return bad("revisit_g is only supported in exact mode".into());
                }
            }
            Method::Vqe | Method::Qaoa | Method::LayeredVqe => {
                if self.mode == Mode::SampledAmplitude {
                    return bad("circuit-only methods use exact or shot_protocol mode".into());
                }
                if self.method == Method::LayeredVqe && self.ansatz != AnsatzSpec::Sign {
                    return bad("layered_vqe runs on the sign ansatz".into());
                }
            }
            Method::NnBaseline => {
                if self.mode == Mode::ShotProtocol {
                    return bad("the network baseline has no circuit to measure".into());
                }
            }
        }
        match self.ansatz {
            AnsatzSpec::Hea { reps: 0 } | AnsatzSpec::Brickwork { depth: 0 } | AnsatzSpec::Qaoa { p: 0 } => {
                bad("ansatz depth must be positive".into())
            }
            _ => Ok(()),
        }
    }

    pub(crate) fn convergence(&self) -> Convergence {
        let exact = self.mode == Mode::Exact;
        Convergence {
            eps: self.eps_conv.unwrap_or(if exact { 1e-6 } else { 1e-3 }),
            window: self.conv_window.unwrap_or(if exact { 1 } else { 10 }),
            min_iterations: self.min_iterations,
        }
    }

    pub(crate) fn shot_options(&self) -> ShotOptions {
        ShotOptions {
            shots_per_basis: self.shots.shots_per_basis,
            noise: self.noise,
            trajectories_per_basis: self.shots.trajectories_per_basis,
        }
    }

    /// Learning rate at 1-based iteration `it` of a layer.
    pub(crate) fn lr_at(&self, base: f64, it: usize) -> f64 {
        if self.max_iterations <= 1 {
            return base;
        }
        base * self.lr_final_fraction.powf((it - 1) as f64 / (self.max_iterations - 1) as f64)
    }

    pub fn run_id(&self, seed: u64) -> String {
        let base = self.id.clone().unwrap_or_else(|| format!("{}_{}", self.method.label(), self.model.label()));
        format!("{base}_s{seed}")
    }
}
