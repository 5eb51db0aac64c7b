use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::OscillatorSpec;
use crate::transform::EtaMetric;

const ETA_SAMPLE_SEED: u64 = 0x6574_615f_6d65;
const ETA_SAMPLE_RADIUS: f64 = 3.0;

/// Largest `|V(η⁻¹·p)* − V(p)| / (1 + |V(p)|)` over seeded random real points.
///
/// The metric condition `V† = ηVη⁻¹` is read pointwise through the coordinate
/// action of `η`; for a potential `V(x)` the operator `ηVη⁻¹` multiplies by `V(η⁻¹x)`.
pub fn pseudo_hermiticity_check(spec: &OscillatorSpec, eta: &EtaMetric, sample_count: usize) -> Result<f64> {
    if spec.dimension() != 2 {
        return Err(Error::Domain("the metric check is two-dimensional".into()));
    }
    let inv = eta.inverse();
    let mut rng = ChaCha8Rng::seed_from_u64(ETA_SAMPLE_SEED);
    let mut worst = 0.0f64;
    for _ in 0..sample_count {
        let p = [
            Complex64::new(rng.random_range(-ETA_SAMPLE_RADIUS..ETA_SAMPLE_RADIUS), 0.0),
            Complex64::new(rng.random_range(-ETA_SAMPLE_RADIUS..ETA_SAMPLE_RADIUS), 0.0),
        ];
        let v = spec.base_potential(&p)?;
        let vm = spec.base_potential(&inv.apply(&p))?;
        worst = worst.max((vm.conj() - v).norm() / (1.0 + v.norm()));
    }
    Ok(worst)
}

/// Tilde frequencies read off the curvature of the sampled potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasuredFrequencies {
    pub frequencies: [Complex64; 2],
    /// `tr² − 4 det` of the curvature matrix.
    pub discriminant: Complex64,
    pub complex: bool,
}

/// Step of the curvature stencil; the potential is quadratic so any step is exact.
const CURVATURE_STEP: f64 = 0.5;

/// Frequencies from the finite-difference Hessian of the 2D potential at the origin.
///
/// `ω̃²` are the eigenvalues of `2·∂²V`; they are flagged complex when the
/// discriminant is negative or any `ω̃` has a non-negligible imaginary part.
pub fn measured_tilde_frequencies_2d(spec: &OscillatorSpec) -> Result<MeasuredFrequencies> {
    if spec.dimension() != 2 {
        return Err(Error::Domain("curvature measurement is two-dimensional".into()));
    }
    let h = CURVATURE_STEP;
    let v = |x: f64, y: f64| spec.base_potential_real(&[x, y]);
    let v00 = v(0.0, 0.0)?;
    let vxx = (v(h, 0.0)? - 2.0 * v00 + v(-h, 0.0)?) / (h * h);
    let vyy = (v(0.0, h)? - 2.0 * v00 + v(0.0, -h)?) / (h * h);
    let vxy = (v(h, h)? - v(h, -h)? - v(-h, h)? + v(-h, -h)?) / (4.0 * h * h);
    let (a, b, c) = (2.0 * vxx, 2.0 * vyy, 2.0 * vxy);
    let tr = a + b;
    let det = a * b - c * c;
    let disc = tr * tr - 4.0 * det;
    let root = disc.sqrt();
    let lo = ((tr - root) / 2.0).sqrt();
    let hi = ((tr + root) / 2.0).sqrt();
    let scale = tr.norm().max(1.0);
    let flagged = [lo, hi].iter().any(|w| w.im.abs() > 1e-6 * w.norm());
    let negative = disc.im.abs() <= 1e-12 * scale * scale && disc.re < 0.0;
    Ok(MeasuredFrequencies {
        frequencies: [lo, hi],
        discriminant: disc,
        complex: negative || flagged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::{eta_metric_2d, CouplingValue};

    #[test]
    fn real_spec_with_identity_metric() {
        let spec = OscillatorSpec::quadratic_2d(1.0, 2.0, CouplingValue::real(0.7)).unwrap();
        assert_eq!(pseudo_hermiticity_check(&spec, &EtaMetric::identity(), 100).unwrap(), 0.0);
    }

    #[test]
    fn imaginary_example_is_pseudo_hermitian() {
        let spec = OscillatorSpec::quadratic_2d(1.0, 3.0, CouplingValue::imaginary(7f64.sqrt())).unwrap();
        let k = spec.decouple().unwrap().parameters.k.unwrap();
        let dev = pseudo_hermiticity_check(&spec, &eta_metric_2d(k), 100).unwrap();
        assert!(dev < 1e-10, "{dev}");
    }

    #[test]
    fn curvature_matches_closed_form() {
        let spec = OscillatorSpec::quadratic_2d(1.0, 3.0, CouplingValue::imaginary(7f64.sqrt())).unwrap();
        let m = measured_tilde_frequencies_2d(&spec).unwrap();
        assert!(!m.complex);
        assert!((m.frequencies[0] * m.frequencies[0] - 2.0).norm() < 1e-9);
        assert!((m.frequencies[1] * m.frequencies[1] - 8.0).norm() < 1e-9);
        let past = OscillatorSpec::quadratic_2d(1.0, 3.0, CouplingValue::imaginary(4.01)).unwrap();
        assert!(measured_tilde_frequencies_2d(&past).unwrap().complex);
    }
}
