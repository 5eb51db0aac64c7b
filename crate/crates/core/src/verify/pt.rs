use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sampling::Sampling;
use crate::error::{Error, Result};
use crate::model::{Eigenstate, ExtendedSystem, OscillatorSpec, REConfig};
use crate::transform::ParityOperator;

/// Relative fit residual above which the PT eigenvalue is reported as indeterminate.
pub const PT_FIT_TOLERANCE: f64 = 1e-4;

/// Measured PT eigenvalue and the relative residual of the fit `ψ(P·p)* ≈ s·ψ(p)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PtMeasurement {
    pub eigenvalue: Complex64,
    pub fit_residual: f64,
}

pub(crate) fn pt_measure_system(
    sys: &ExtendedSystem,
    state: &Eigenstate,
    parity: &ParityOperator,
    sampling: &Sampling,
) -> Result<PtMeasurement> {
    sampling.check(sys)?;
    if parity.dimension() != sys.dimension() {
        return Err(Error::Shape {
            expected: sys.dimension(),
            found: parity.dimension(),
        });
    }
    let psi = sys.state(state)?;
    let loci = sampling.poles(sys)?;
    let r = sampling.guard_radius();
    let pairs = (0..sampling.len())
        .into_par_iter()
        .filter_map(|i| {
            let p = sampling.point(i);
            let image = parity.apply(&p);
            // Both the point and its mirror must stay clear of the poles.
            let clear = loci.is_empty()
                || (super::poles::distance_to_poles(&loci, &p) > r
                    && super::poles::distance_to_poles(&loci, &image) > r);
            clear.then(|| -> Result<(Complex64, Complex64)> {
                Ok((psi.evaluate_real(&image)?.conj(), psi.evaluate_real(&p)?))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let (mut num, mut den) = (Complex64::new(0.0, 0.0), 0.0);
    for (a, b) in &pairs {
        num += b.conj() * a;
        den += b.norm_sqr();
    }
    if !(den > 0.0) {
        return Err(Error::Indeterminate("wavefunction vanishes on the test set".into()));
    }
    let s = num / den;
    let err: f64 = pairs.iter().map(|(a, b)| (a - s * b).norm_sqr()).sum();
    Ok(PtMeasurement {
        eigenvalue: s,
        fit_residual: (err / den).sqrt(),
    })
}

/// Least-squares `s` with `ψ(P·p)* = s·ψ(p)` over the sample points.
///
/// Fails as indeterminate when the fit residual exceeds [`PT_FIT_TOLERANCE`].
pub fn pt_parity_eigenvalue(
    spec: &OscillatorSpec,
    config: &REConfig,
    state: &Eigenstate,
    parity: &ParityOperator,
    sampling: &Sampling,
) -> Result<PtMeasurement> {
    let sys = ExtendedSystem::new(spec, config)?;
    let m = pt_measure_system(&sys, state, parity, sampling)?;
    if m.fit_residual > PT_FIT_TOLERANCE {
        return Err(Error::Indeterminate(format!(
            "{} is not a PT eigenfunction under {} (fit residual {:.3e})",
            state, parity.name, m.fit_residual
        )));
    }
    Ok(m)
}

/// Sign predicted for a product state: ground axes give +1, `Excited(n)` gives `(−1)^(n+1)`.
pub fn predicted_pt_sign(state: &Eigenstate) -> f64 {
    state
        .axes()
        .iter()
        .map(|s| match s {
            crate::model::AxisState::Ground => 1.0,
            crate::model::AxisState::Excited(n) => {
                if n % 2 == 0 {
                    -1.0
                } else {
                    1.0
                }
            }
        })
        .product()
}
