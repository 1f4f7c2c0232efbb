use std::f64::consts::FRAC_PI_2;

use crate::ansatz::{Angle, Circuit};
use crate::qsim::Gate;
use crate::{Error, Result};

/// Shift used by the two-term parameter-shift rule.
pub const PARAM_SHIFT: f64 = FRAC_PI_2;

/// Parameter-shift gradient `∂E/∂θ = Σ_occurrences scale · ½[E(+π/2) − E(−π/2)]`.
///
/// `energy_fn` maps a bound gate list to an energy; each occurrence of a
/// parameter is shifted on its own, which makes the rule exact for shared
/// parameters too. Exact whenever `E` is a trigonometric polynomial of degree
/// one in each gate angle (e.g. a plain expectation value, or a hybrid energy
/// whose shifted gates sit at the end of the circuit).
pub fn param_shift_gradient<F>(circuit: &Circuit, names: &[String], mut energy_fn: F) -> Result<Vec<f64>>
where
    F: FnMut(&[Gate]) -> Result<f64>,
{
    names
        .iter()
        .map(|name| {
            if !circuit.params.contains_key(name) {
                return Err(Error::UnknownParameter(name.clone()));
            }
            let mut g = 0.0;
            for idx in circuit.occurrences(name) {
                let Angle::Param { scale, .. } = circuit.gates[idx].angle else { unreachable!() };
                let plus = energy_fn(&circuit.bind_shifted(idx, PARAM_SHIFT)?)?;
                let minus = energy_fn(&circuit.bind_shifted(idx, -PARAM_SHIFT)?)?;
                g += scale * 0.5 * (plus - minus);
            }
            Ok(g)
        })
        .collect()
}
