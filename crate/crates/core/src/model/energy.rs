use num_complex::Complex64;

use super::{AxisState, Eigenstate, OscillatorSpec, REConfig};
use crate::error::{Error, Result};
use crate::transform::DecoupledSystem;

/// `Σ (n_i + m_i + 1) ω̃_i` over excited axes; ground axes contribute nothing.
pub fn relative_energy(config: &REConfig, state: &Eigenstate, sys: &DecoupledSystem) -> Result<Complex64> {
    let d = sys.dimension();
    for found in [config.dimension(), state.dimension()] {
        if found != d {
            return Err(Error::Shape { expected: d, found });
        }
    }
    Ok(config
        .codimensions()
        .iter()
        .zip(state.axes())
        .zip(&sys.tilde_frequencies)
        .map(|((&m, &s), &w)| match s {
            AxisState::Ground => Complex64::new(0.0, 0.0),
            AxisState::Excited(n) => (n + m + 1) as f64 * w,
        })
        .sum())
}

/// Energy of the unextended oscillator: `Σ (n_i + ½) ω̃_i` plus the potential constant.
pub fn unextended_energy(spec: &OscillatorSpec, quantum_numbers: &[u32]) -> Result<Complex64> {
    if quantum_numbers.len() != spec.dimension() {
        return Err(Error::Shape {
            expected: spec.dimension(),
            found: quantum_numbers.len(),
        });
    }
    let sys = spec.decouple()?;
    Ok(quantum_numbers
        .iter()
        .zip(&sys.tilde_frequencies)
        .map(|(&n, &w)| (n as f64 + 0.5) * w)
        .sum::<Complex64>()
        + sys.potential_constant)
}

/// Planar energy written through the tilde ratio: `(r̃ n₁ + n₂ + (r̃ + 1)/2) ω̃₂`.
pub fn unextended_energy_ratio_form(r_tilde: f64, omega2_tilde: f64, n1: u32, n2: u32) -> f64 {
    (r_tilde * n1 as f64 + n2 as f64 + (r_tilde + 1.0) / 2.0) * omega2_tilde
}
