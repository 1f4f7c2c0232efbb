//! Stochastic depolarizing noise via Monte-Carlo trajectories.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::{native_decomposition, Gate, GateKind, Statevector};
use crate::rng::{self, Rng, Stream};
use crate::{Error, Result};

/// Per-gate depolarizing probabilities.
///
/// With probability `p` a gate's qubit is replaced by the maximally mixed state,
/// i.e. the channel `ρ → (1 − p) ρ + p · I/2` per touched qubit. A trajectory
/// realizes it by applying a uniformly random element of `{I, X, Y, Z}` with
/// probability `p`, so `p = 1` fully depolarizes.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct NoiseSpec {
    /// Error probability per single-qubit gate.
    pub p1: f64,
    /// Error probability per qubit of a two-qubit gate.
    pub p2: f64,
}

impl NoiseSpec {
    pub const NONE: NoiseSpec = NoiseSpec { p1: 0.0, p2: 0.0 };

    pub fn new(p1: f64, p2: f64) -> Result<Self> {
        let spec = Self { p1, p2 };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        for p in [self.p1, self.p2] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidProbability(p));
            }
        }
        Ok(())
    }

    pub fn is_noiseless(&self) -> bool {
        self.p1 == 0.0 && self.p2 == 0.0
    }
}

/// One noisy trajectory of `gates` starting from `|0…0⟩`.
///
/// Gates are first lowered to the native set (see [`native_decomposition`]),
/// so a noisy `Rzz` pays for its two CZs and surrounding fixed rotations.
pub fn run_noisy_trajectory(
    n_qubits: usize,
    gates: &[Gate],
    noise: NoiseSpec,
    seed: u64,
) -> Result<Statevector> {
    let mut rng = rng::substream(seed, Stream::Noise);
    let mut state = Statevector::zero(n_qubits)?;
    apply_noisy(&mut state, gates, noise, &mut rng)?;
    Ok(state)
}

/// Applies `gates` to `state` in place, injecting depolarizing errors drawn from `rng`.
pub fn apply_noisy(
    state: &mut Statevector,
    gates: &[Gate],
    noise: NoiseSpec,
    rng: &mut Rng,
) -> Result<()> {
    noise.validate()?;
    let n = state.n_qubits();
    for gate in gates {
        gate.validate(n)?;
    }
    if noise.is_noiseless() {
        gates.iter().for_each(|g| state.apply_unchecked(g));
        return Ok(());
    }
    for gate in gates {
        for native in native_decomposition(gate) {
            state.apply_unchecked(&native);
            let p = if native.kind.arity() == 2 { noise.p2 } else { noise.p1 };
            for &q in &native.targets {
                if p > 0.0 && rng.random::<f64>() < p {
                    let kind = match rng.random_range(0..4u8) {
                        0 => continue,
                        1 => GateKind::X,
                        2 => GateKind::Y,
                        _ => GateKind::Z,
                    };
                    state.apply_unchecked(&Gate::fixed(kind, q));
                }
            }
        }
    }
    Ok(())
}
