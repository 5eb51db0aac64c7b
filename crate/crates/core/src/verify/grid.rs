use super::poles::pole_scan_system;
use crate::error::{Error, Result};
use crate::model::{ExtendedSystem, OscillatorSpec, REConfig};
use crate::numerics::{lowest_eigenvalues, TridiagonalMatrix};

/// Lowest `k` eigenvalues of `−d²/dx² + V` on `[lo, hi]` with Dirichlet walls and
/// `n_points` interior nodes, second-order differences.
pub fn grid_spectrum(
    spec: &OscillatorSpec,
    config: &REConfig,
    bounds: (f64, f64),
    n_points: usize,
    k: usize,
) -> Result<Vec<f64>> {
    if spec.dimension() != 1 {
        return Err(Error::Domain("grid diagonalization is one-dimensional".into()));
    }
    if !spec.is_hermitian() {
        return Err(Error::Domain(
            "grid diagonalization needs a real potential".into(),
        ));
    }
    let (lo, hi) = bounds;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::Domain("box needs lo < hi".into()));
    }
    if n_points < 2 || k == 0 || k > n_points {
        return Err(Error::Domain(format!(
            "need 1 ≤ k ≤ n_points and n_points ≥ 2 (got k = {k}, n_points = {n_points})"
        )));
    }
    let sys = ExtendedSystem::new(spec, config)?;
    let poles = pole_scan_system(&sys, &[bounds])?;
    if !poles.is_empty() {
        return Err(Error::Singular(format!(
            "the potential has {} real pole(s) inside [{lo}, {hi}]",
            poles.len()
        )));
    }
    let h = (hi - lo) / (n_points + 1) as f64;
    let inv = 1.0 / (h * h);
    let diagonal = (1..=n_points)
        .map(|i| {
            let v = sys.potential_real(&[lo + i as f64 * h])?;
            if v.im.abs() > 1e-9 * (1.0 + v.re.abs()) {
                return Err(Error::Domain(format!("potential is not real: {v}")));
            }
            Ok(2.0 * inv + v.re)
        })
        .collect::<Result<Vec<_>>>()?;
    let matrix = TridiagonalMatrix::new(diagonal, vec![-inv; n_points - 1])?;
    lowest_eigenvalues(&matrix, k)
}

/// Richardson combination of [`grid_spectrum`] at `n` and `2n + 1` interior points
/// (half the spacing), cancelling the leading `h²` error.
pub fn grid_spectrum_extrapolated(
    spec: &OscillatorSpec,
    config: &REConfig,
    bounds: (f64, f64),
    n_points: usize,
    k: usize,
) -> Result<Vec<f64>> {
    let coarse = grid_spectrum(spec, config, bounds, n_points, k)?;
    let fine = grid_spectrum(spec, config, bounds, 2 * n_points + 1, k)?;
    Ok(coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| (4.0 * f - c) / 3.0)
        .collect())
}

/// Consecutive differences of an ascending sequence.
pub fn gaps(levels: &[f64]) -> Vec<f64> {
    levels.windows(2).map(|w| w[1] - w[0]).collect()
}
