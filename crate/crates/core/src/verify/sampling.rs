use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::poles::{distance_to_poles, pole_scan_system, PoleLocus};
use crate::error::{Error, Result};
use crate::model::ExtendedSystem;
use crate::numerics::{integrate, Grid};

/// Step of the pointwise finite-difference stencils.
pub const STENCIL_STEP: f64 = 1e-3;
/// Sample points closer than this many coarse spacings to a pole are skipped.
pub const GUARD_SPACINGS: f64 = 5.0;

/// Product grid over the original coordinates used by the verification oracles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sampling {
    pub grids: Vec<Grid>,
    pub stencil_step: f64,
    pub guard_spacings: f64,
}

impl Sampling {
    pub fn new(grids: Vec<Grid>) -> Self {
        Self {
            grids,
            stencil_step: STENCIL_STEP,
            guard_spacings: GUARD_SPACINGS,
        }
    }

    /// Grids centred on the real part of the shifted origin, wide enough for the
    /// slowest Gaussian decay.
    pub fn automatic(sys: &ExtendedSystem, points_per_axis: usize) -> Result<Self> {
        let w_min = sys
            .decoupled()
            .tilde_frequencies
            .iter()
            .map(|w| w.re)
            .fold(f64::INFINITY, f64::min);
        if !(w_min > 0.0) {
            return Err(Error::Domain(
                "automatic sampling needs tilde frequencies with positive real part".into(),
            ));
        }
        let zero = vec![Complex64::new(0.0, 0.0); sys.dimension()];
        let centre = sys.map().inverse(&zero);
        let grids = centre
            .iter()
            .map(|c| Grid::for_frequency(c.re, w_min, points_per_axis))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(grids))
    }

    pub fn dimension(&self) -> usize {
        self.grids.len()
    }

    pub fn bounds(&self) -> Vec<(f64, f64)> {
        self.grids.iter().map(|g| (g.lo(), g.hi())).collect()
    }

    pub fn len(&self) -> usize {
        self.grids.iter().map(|g| g.len()).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Point for a flat index, last axis fastest.
    pub fn point(&self, mut flat: usize) -> Vec<f64> {
        let mut p = vec![0.0; self.grids.len()];
        for (k, g) in self.grids.iter().enumerate().rev() {
            p[k] = g.point(flat % g.len());
            flat /= g.len();
        }
        p
    }

    pub(crate) fn guard_radius(&self) -> f64 {
        self.guard_spacings
            * self
                .grids
                .iter()
                .map(|g| g.spacing())
                .fold(0.0, f64::max)
    }

    pub(crate) fn check(&self, sys: &ExtendedSystem) -> Result<()> {
        if self.grids.len() != sys.dimension() {
            return Err(Error::Shape {
                expected: sys.dimension(),
                found: self.grids.len(),
            });
        }
        Ok(())
    }

    /// Pole loci of `sys` in the sampled box.
    pub fn poles(&self, sys: &ExtendedSystem) -> Result<Vec<PoleLocus>> {
        self.check(sys)?;
        pole_scan_system(sys, &self.bounds())
    }

    /// Mask of flat indices outside the guard band around `loci`.
    pub fn usable(&self, loci: &[PoleLocus]) -> Vec<bool> {
        let r = self.guard_radius();
        (0..self.len())
            .map(|i| loci.is_empty() || distance_to_poles(loci, &self.point(i)) > r)
            .collect()
    }

    /// Nested composite Simpson integral of samples stored last-axis-fastest.
    pub fn integrate(&self, values: &[Complex64]) -> Result<Complex64> {
        if values.len() != self.len() {
            return Err(Error::Shape {
                expected: self.len(),
                found: values.len(),
            });
        }
        let mut current = values.to_vec();
        for g in self.grids.iter().rev() {
            current = current
                .chunks(g.len())
                .map(|row| integrate(row, g))
                .collect::<Result<Vec<_>>>()?;
        }
        Ok(current[0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_integration_of_gaussian() {
        let g = Grid::new(0.0, 8.0, 161).unwrap();
        let s = Sampling::new(vec![g, g]);
        let vals: Vec<Complex64> = (0..s.len())
            .map(|i| {
                let p = s.point(i);
                Complex64::new((-(p[0] * p[0] + p[1] * p[1])).exp(), 0.0)
            })
            .collect();
        let v = s.integrate(&vals).unwrap();
        assert!((v.re - std::f64::consts::PI).abs() < 1e-8);
        assert!(s.integrate(&vals[1..]).is_err());
    }

    #[test]
    fn point_ordering_is_last_axis_fastest() {
        let s = Sampling::new(vec![Grid::spanning(0.0, 8.0, 9).unwrap(), Grid::spanning(0.0, 16.0, 9).unwrap()]);
        assert_eq!(s.point(0), vec![0.0, 0.0]);
        assert_eq!(s.point(1), vec![0.0, 2.0]);
        assert_eq!(s.point(9), vec![1.0, 0.0]);
    }
}
