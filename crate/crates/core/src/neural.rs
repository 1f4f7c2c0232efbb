//! The classical amplitude model `F = Σ_s f(s)|s⟩⟨s|`: a small tanh MLP over
//! the spins `x_j = 1 − 2 s_j` with analytic backpropagation.
//!
//! All weights live in one flat vector. For each layer, in order: the
//! `out × in` weight matrix (row-major), then the `out` biases. A
//! [`ModelGradient`] uses the same layout.

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::rng::Rng;
use crate::{Error, Result, C64};

/// How the last linear layer becomes an amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputMode {
    /// `f = act(z)`, strictly positive.
    NonNeg,
    /// `f = act(z₀) · e^{i z₁}` (two output units).
    Complex,
    /// `f = z`, a signed real wavefunction (used by the pure-NN baseline).
    Signed,
}

/// Positive output activation for the non-negative and complex modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PositiveActivation {
    #[default]
    Softplus,
    Exp,
}

impl PositiveActivation {
    fn value(self, z: f64) -> f64 {
        match self {
            PositiveActivation::Softplus => softplus(z),
            PositiveActivation::Exp => z.exp(),
        }
    }

    fn derivative(self, z: f64) -> f64 {
        match self {
            PositiveActivation::Softplus => sigmoid(z),
            PositiveActivation::Exp => z.exp(),
        }
    }
}

pub fn softplus(z: f64) -> f64 {
    if z > 30.0 {
        z + (-z).exp()
    } else {
        z.exp().ln_1p()
    }
}

pub fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// Per-parameter partial derivatives, laid out like the model's weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelGradient {
    pub values: Vec<f64>,
}

impl ModelGradient {
    pub fn zeros(len: usize) -> Self {
        Self { values: vec![0.0; len] }
    }

    pub fn add_assign(&mut self, other: &ModelGradient) {
        self.values.iter_mut().zip(&other.values).for_each(|(a, b)| *a += b);
    }

    pub fn scale(&mut self, c: f64) {
        self.values.iter_mut().for_each(|a| *a *= c);
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeModel {
    pub layer_sizes: Vec<usize>,
    pub mode: OutputMode,
    #[serde(default)]
    pub activation: PositiveActivation,
    pub params: Vec<f64>,
}

struct Cache {
    /// Activations entering each layer (`acts[0]` is the spin input).
    acts: Vec<Vec<f64>>,
    out: Vec<f64>,
}

fn param_count(sizes: &[usize]) -> usize {
    sizes.windows(2).map(|w| w[1] * w[0] + w[1]).sum()
}

impl AmplitudeModel {
    /// Model with the given hidden widths, all parameters zero.
    pub fn zeros(n_qubits: usize, hidden: &[usize], mode: OutputMode) -> Result<Self> {
        if n_qubits == 0 || hidden.contains(&0) {
            return Err(Error::InvalidModel("layer widths must be positive".into()));
        }
        let out = if mode == OutputMode::Complex { 2 } else { 1 };
        let mut layer_sizes = vec![n_qubits];
        layer_sizes.extend_from_slice(hidden);
        layer_sizes.push(out);
        let params = vec![0.0; param_count(&layer_sizes)];
        Ok(Self { layer_sizes, mode, activation: PositiveActivation::Softplus, params })
    }

    /// Seeded `U(−0.5, 0.5)/√fan_in` initialization.
    pub fn random(n_qubits: usize, hidden: &[usize], mode: OutputMode, rng: &mut Rng) -> Result<Self> {
        let mut m = Self::zeros(n_qubits, hidden, mode)?;
        m.fill_random(rng, 0.5, 0.5);
        Ok(m)
    }

    /// Default architecture: two hidden layers of width `n`.
    pub fn default_for(n_qubits: usize, mode: OutputMode, rng: &mut Rng) -> Result<Self> {
        Self::random(n_qubits, &[n_qubits, n_qubits], mode, rng)
    }

    /// Uniform draws scaled by `1/√fan_in`: `hidden_scale` for hidden
    /// layers, `out_scale` for the output layer.
    fn fill_random(&mut self, rng: &mut Rng, hidden_scale: f64, out_scale: f64) {
        let n_layers = self.layer_sizes.len() - 1;
        let mut off = 0;
        for l in 0..n_layers {
            let (fan_in, fan_out) = (self.layer_sizes[l], self.layer_sizes[l + 1]);
            let scale = if l + 1 == n_layers { out_scale } else { hidden_scale } / (fan_in as f64).sqrt();
            for p in &mut self.params[off..off + fan_in * fan_out + fan_out] {
                *p = rng.random_range(-1.0..1.0) * scale;
            }
            off += fan_in * fan_out + fan_out;
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.layer_sizes[0]
    }

    pub fn n_params(&self) -> usize {
        self.params.len()
    }

    /// Validates the flat layout against `layer_sizes` and the mode.
    pub fn validate(&self) -> Result<()> {
        let out = *self.layer_sizes.last().unwrap_or(&0);
        let expected_out = if self.mode == OutputMode::Complex { 2 } else { 1 };
        if self.layer_sizes.len() < 2 || out != expected_out {
            return Err(Error::InvalidModel(format!("output width {out} does not fit mode {:?}", self.mode)));
        }
        if self.params.len() != param_count(&self.layer_sizes) {
            return Err(Error::DimensionMismatch { expected: param_count(&self.layer_sizes), got: self.params.len() });
        }
        if !self.params.iter().all(|p| p.is_finite()) {
            return Err(Error::InvalidModel("non-finite weight".into()));
        }
        Ok(())
    }

    fn check_input(&self, s: usize) -> Result<()> {
        let n = self.n_qubits();
        if n < usize::BITS as usize && s >> n != 0 {
            return Err(Error::DimensionMismatch { expected: n, got: usize::BITS as usize - s.leading_zeros() as usize });
        }
        Ok(())
    }

    fn forward_cache(&self, s: usize) -> Cache {
        let n = self.n_qubits();
        let input: Vec<f64> = (0..n).map(|j| if s >> (n - 1 - j) & 1 == 1 { -1.0 } else { 1.0 }).collect();
        let n_layers = self.layer_sizes.len() - 1;
        let mut acts = vec![input];
        let mut off = 0;
        let mut out = Vec::new();
        for l in 0..n_layers {
            let (fi, fo) = (self.layer_sizes[l], self.layer_sizes[l + 1]);
            let a = acts.last().expect("input layer");
            let w = &self.params[off..off + fi * fo];
            let b = &self.params[off + fi * fo..off + fi * fo + fo];
            let z: Vec<f64> = (0..fo)
                .map(|o| b[o] + w[o * fi..(o + 1) * fi].iter().zip(a).map(|(wi, ai)| wi * ai).sum::<f64>())
                .collect();
            off += fi * fo + fo;
            if l + 1 == n_layers {
                out = z;
            } else {
                acts.push(z.into_iter().map(f64::tanh).collect());
            }
        }
        Cache { acts, out }
    }

    fn output(&self, z: &[f64]) -> C64 {
        match self.mode {
            OutputMode::NonNeg => C64::new(self.activation.value(z[0]), 0.0),
            OutputMode::Complex => C64::from_polar(self.activation.value(z[0]), z[1]),
            OutputMode::Signed => C64::new(z[0], 0.0),
        }
    }

    /// `f(s)` for basis index `s` (qubit 0 = most significant bit).
    pub fn forward(&self, s: usize) -> Result<C64> {
        self.check_input(s)?;
        Ok(self.eval(s))
    }

    /// `f(s)` for an explicit bitstring, qubit 0 first.
    pub fn forward_bits(&self, bits: &[u8]) -> Result<C64> {
        if bits.len() != self.n_qubits() {
            return Err(Error::DimensionMismatch { expected: self.n_qubits(), got: bits.len() });
        }
        let s = bits.iter().fold(0usize, |acc, &b| (acc << 1) | usize::from(b & 1));
        Ok(self.eval(s))
    }

    pub(crate) fn eval(&self, s: usize) -> C64 {
        self.output(&self.forward_cache(s).out)
    }

    /// Real amplitude for the non-complex modes (the real part otherwise).
    pub fn eval_real(&self, s: usize) -> f64 {
        self.eval(s).re
    }

    /// `f(s)` for every basis state.
    pub fn evaluate_all(&self) -> Vec<C64> {
        let dim = 1usize << self.n_qubits();
        if dim >= 1024 {
            (0..dim).into_par_iter().map(|s| self.eval(s)).collect()
        } else {
            (0..dim).map(|s| self.eval(s)).collect()
        }
    }

    /// Gradient of `Re(conj(g) · f(s))` with respect to every weight.
    pub fn backward_complex(&self, s: usize, upstream: C64) -> ModelGradient {
        let mut grad = ModelGradient::zeros(self.params.len());
        self.accumulate(s, upstream, &mut grad.values);
        grad
    }

    /// `upstream · ∂f(s)/∂w` for the real modes.
    pub fn backward(&self, s: usize, upstream: f64) -> ModelGradient {
        self.backward_complex(s, C64::new(upstream, 0.0))
    }

    /// `Σ_k Re(conj(g_k) · ∂f(s_k)/∂w)`.
    pub fn backward_batch(&self, items: &[(usize, C64)]) -> ModelGradient {
        let len = self.params.len();
        let values = if items.len() >= 2048 {
            items
                .par_chunks(512)
                .map(|chunk| {
                    let mut g = vec![0.0; len];
                    chunk.iter().for_each(|&(s, u)| self.accumulate(s, u, &mut g));
                    g
                })
                .reduce(|| vec![0.0; len], |mut a, b| {
                    a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                    a
                })
        } else {
            let mut g = vec![0.0; len];
            items.iter().for_each(|&(s, u)| self.accumulate(s, u, &mut g));
            g
        };
        ModelGradient { values }
    }

    fn accumulate(&self, s: usize, upstream: C64, grad: &mut [f64]) {
        if upstream == C64::new(0.0, 0.0) {
            return;
        }
        let cache = self.forward_cache(s);
        let z = &cache.out;
        // δ at the output pre-activations
        let mut delta: Vec<f64> = match self.mode {
            OutputMode::NonNeg => vec![upstream.re * self.activation.derivative(z[0])],
            OutputMode::Signed => vec![upstream.re],
            OutputMode::Complex => {
                let phase = C64::from_polar(1.0, z[1]);
                let d0 = (upstream.conj() * phase * self.activation.derivative(z[0])).re;
                let f = phase * self.activation.value(z[0]);
                let d1 = (upstream.conj() * C64::new(0.0, 1.0) * f).re;
                vec![d0, d1]
            }
        };
        let n_layers = self.layer_sizes.len() - 1;
        let mut offsets = Vec::with_capacity(n_layers);
        let mut off = 0;
        for l in 0..n_layers {
            offsets.push(off);
            off += self.layer_sizes[l] * self.layer_sizes[l + 1] + self.layer_sizes[l + 1];
        }
        for l in (0..n_layers).rev() {
            let (fi, fo) = (self.layer_sizes[l], self.layer_sizes[l + 1]);
            let off = offsets[l];
            let a = &cache.acts[l];
            for o in 0..fo {
                let d = delta[o];
                if d != 0.0 {
                    let row = &mut grad[off + o * fi..off + (o + 1) * fi];
                    row.iter_mut().zip(a).for_each(|(g, ai)| *g += d * ai);
                }
                grad[off + fi * fo + o] += d;
            }
            if l > 0 {
                let w = &self.params[off..off + fi * fo];
                delta = (0..fi)
                    .map(|j| {
                        let back: f64 = (0..fo).map(|o| w[o * fi + j] * delta[o]).sum();
                        back * (1.0 - a[j] * a[j])
                    })
                    .collect();
            }
        }
    }

    /// Re-draws weights near zero so `f` is constant up to a relative spread
    /// below `1e-3` (verified exhaustively for `n ≤ 14`); keeps mode and shape.
    pub fn reset_to_identity(&mut self, rng: &mut Rng) {
        let mut out_scale = 1e-4;
        loop {
            self.fill_random(rng, 1e-2, out_scale);
            if self.n_qubits() > 14 || self.relative_spread() < 1e-4 || out_scale < 1e-12 {
                return;
            }
            out_scale *= 0.1;
        }
    }

    /// `max_s |f(s)| / min_s |f(s)| − 1` over all basis states.
    pub fn relative_spread(&self) -> f64 {
        let values = self.evaluate_all();
        let (lo, hi) = values.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v.norm()), hi.max(v.norm())));
        hi / lo - 1.0
    }

    /// Adds a zero-initialized phase head; outputs are unchanged.
    pub fn into_complex(mut self) -> Result<Self> {
        match self.mode {
            OutputMode::Complex => return Ok(self),
            OutputMode::Signed => return Err(Error::InvalidModel("signed models have no complex form".into())),
            OutputMode::NonNeg => {}
        }
        let k = self.layer_sizes.len();
        let fi = self.layer_sizes[k - 2];
        let last = param_count(&self.layer_sizes[..k - 1]);
        // old last layer: [w (1×fi), b (1)] → new: [w (2×fi), b (2)]
        let w_old: Vec<f64> = self.params[last..last + fi].to_vec();
        let b_old = self.params[last + fi];
        self.params.truncate(last);
        self.params.extend(w_old);
        self.params.extend(std::iter::repeat_n(0.0, fi));
        self.params.push(b_old);
        self.params.push(0.0);
        self.layer_sizes[k - 1] = 2;
        self.mode = OutputMode::Complex;
        Ok(self)
    }
}
