use std::cmp::Ordering;

use num_complex::Complex64;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::{AxisState, Eigenstate, OscillatorSpec, REConfig};
use crate::error::{Error, Result};

/// Default tolerance for grouping floating energies.
pub const GROUPING_TOLERANCE: f64 = 1e-9;

/// How levels are merged into degenerate groups.
#[derive(Debug, Clone, PartialEq)]
pub enum Grouping {
    /// Merge energies closer than the tolerance (relative to the largest tilde frequency).
    Tolerance(f64),
    /// Tilde frequencies are `ratio_i · unit`; merge by exact rational arithmetic.
    Exact(Vec<Ratio<i64>>),
}

impl Default for Grouping {
    fn default() -> Self {
        Grouping::Tolerance(GROUPING_TOLERANCE)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub energy: Complex64,
    pub multiplicity: usize,
    pub states: Vec<Eigenstate>,
    /// The energy has a non-negligible imaginary part.
    pub complex: bool,
}

/// Relative energies up to a cutoff, grouped by degeneracy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumTable {
    pub entries: Vec<SpectrumEntry>,
}

impl SpectrumTable {
    pub fn multiplicities(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.multiplicity).collect()
    }

    pub fn energies(&self) -> Vec<Complex64> {
        self.entries.iter().map(|e| e.energy).collect()
    }
}

fn product(levels: &[Vec<(AxisState, u32)>]) -> Vec<Vec<(AxisState, u32)>> {
    let mut out: Vec<Vec<(AxisState, u32)>> = vec![vec![]];
    for axis in levels {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                axis.iter().map(move |&lvl| {
                    let mut v = prefix.clone();
                    v.push(lvl);
                    v
                })
            })
            .collect();
    }
    out
}

/// Enumerate every product state with relative energy at most `cutoff` and group degenerate levels.
///
/// Per axis the ladder is `0` (ground) then `(n + m + 1) ω̃` for `n = 0, 1, …`.
pub fn spectrum(
    spec: &OscillatorSpec,
    config: &REConfig,
    cutoff: f64,
    grouping: &Grouping,
) -> Result<SpectrumTable> {
    config.check_dimension(spec)?;
    if !(cutoff.is_finite() && cutoff >= 0.0) {
        return Err(Error::Domain(format!("energy cutoff must be non-negative, got {cutoff}")));
    }
    let sys = spec.decouple()?;
    let omegas = &sys.tilde_frequencies;
    let scale = omegas.iter().map(|w| w.norm()).fold(0.0, f64::max);
    if let Some(w) = omegas.iter().find(|w| w.re <= 0.0) {
        return Err(Error::Domain(format!(
            "tilde frequency {w} has no positive real part; the ladder is unbounded"
        )));
    }

    let exact_units = match grouping {
        Grouping::Tolerance(_) => None,
        Grouping::Exact(ratios) => {
            if ratios.len() != omegas.len() {
                return Err(Error::Shape {
                    expected: omegas.len(),
                    found: ratios.len(),
                });
            }
            if ratios.iter().any(|r| *r <= Ratio::from_integer(0)) {
                return Err(Error::Domain("frequency ratios must be positive".into()));
            }
            let to_f = |r: &Ratio<i64>| *r.numer() as f64 / *r.denom() as f64;
            let unit = omegas[0] / to_f(&ratios[0]);
            for (w, r) in omegas.iter().zip(ratios) {
                if (w - unit * to_f(r)).norm() > 1e-9 * scale {
                    return Err(Error::Domain(format!(
                        "tilde frequency {w} is not {r} times the common unit {unit}"
                    )));
                }
            }
            Some((unit, ratios.clone()))
        }
    };

    let tol = cutoff * 1e-12 + 1e-12;
    let levels: Vec<Vec<(AxisState, u32)>> = omegas
        .iter()
        .zip(config.codimensions())
        .map(|(w, &m)| {
            let mut v = vec![(AxisState::Ground, 0)];
            let mut n = 0u32;
            while (n + m + 1) as f64 * w.re <= cutoff + tol {
                v.push((AxisState::Excited(n), n + m + 1));
                n += 1;
            }
            v
        })
        .collect();

    let mut rows: Vec<(Complex64, Option<Ratio<i64>>, Eigenstate)> = product(&levels)
        .into_iter()
        .filter_map(|combo| {
            let e: Complex64 = combo
                .iter()
                .zip(omegas)
                .map(|(&(_, q), w)| q as f64 * w)
                .sum();
            if e.re > cutoff + tol {
                return None;
            }
            let exact = exact_units.as_ref().map(|(_, ratios)| {
                combo
                    .iter()
                    .zip(ratios)
                    .map(|(&(_, q), r)| r * q as i64)
                    .fold(Ratio::from_integer(0), |a, b| a + b)
            });
            let state = Eigenstate::new(combo.iter().map(|&(s, _)| s).collect())
                .expect("dimension from config");
            Some((e, exact, state))
        })
        .collect();

    let group_tol = match grouping {
        Grouping::Tolerance(t) => *t * scale.max(1.0),
        Grouping::Exact(_) => 0.0,
    };
    rows.sort_by(|a, b| match (&a.1, &b.1) {
        (Some(x), Some(y)) => x.cmp(y).then_with(|| a.2.cmp(&b.2)),
        _ => a
            .0
            .re
            .partial_cmp(&b.0.re)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.0.im.partial_cmp(&b.0.im).unwrap_or(Ordering::Equal)),
    });

    let mut entries: Vec<SpectrumEntry> = Vec::new();
    let mut last_exact: Option<Ratio<i64>> = None;
    for (e, exact, state) in rows {
        let same = match (entries.last(), &exact) {
            (Some(_), Some(x)) => last_exact.as_ref() == Some(x),
            (Some(prev), None) => (prev.energy - e).norm() <= group_tol,
            (None, _) => false,
        };
        if same {
            let entry = entries.last_mut().expect("checked non-empty");
            entry.states.push(state);
            entry.multiplicity += 1;
        } else {
            let energy = match (&exact, &exact_units) {
                (Some(x), Some((unit, _))) => unit * (*x.numer() as f64 / *x.denom() as f64),
                _ => e,
            };
            entries.push(SpectrumEntry {
                energy,
                multiplicity: 1,
                states: vec![state],
                complex: energy.im.abs() > 1e-12 * scale.max(1.0),
            });
            last_exact = exact;
        }
    }
    for entry in &mut entries {
        entry.states.sort();
    }
    Ok(SpectrumTable { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::CouplingValue;

    #[test]
    fn one_dimension_has_no_degeneracy() {
        let spec = OscillatorSpec::linear(2.0, CouplingValue::imaginary(1.0)).unwrap();
        let t = spectrum(&spec, &REConfig::new(vec![3]).unwrap(), 30.0, &Grouping::default()).unwrap();
        assert!(t.multiplicities().iter().all(|&m| m == 1));
        let e: Vec<f64> = t.energies().iter().map(|e| e.re).collect();
        assert_eq!(e, vec![0.0, 8.0, 10.0, 12.0, 14.0, 16.0, 18.0, 20.0, 22.0, 24.0, 26.0, 28.0, 30.0]);
    }

    #[test]
    fn rational_ratio_grouping() {
        let spec = OscillatorSpec::quadratic_2d(1.0, 2.0, CouplingValue::real(7f64.sqrt() / 2.0)).unwrap();
        let cfg = REConfig::new(vec![0, 0]).unwrap();
        let w2 = 4.5f64.sqrt();
        let exact = Grouping::Exact(vec![Ratio::new(1, 3), Ratio::from_integer(1)]);
        let t = spectrum(&spec, &cfg, 3.0 * w2, &exact).unwrap();
        // Levels in units of ω̃₁: counts of n₁ + 3n₂ = k for k = 0..=9.
        assert_eq!(t.multiplicities(), vec![1, 1, 1, 2, 2, 2, 3, 3, 3, 4]);
        let floaty = spectrum(&spec, &cfg, 3.0 * w2, &Grouping::default()).unwrap();
        assert_eq!(floaty.multiplicities(), t.multiplicities());
        let bad = Grouping::Exact(vec![Ratio::new(1, 2), Ratio::from_integer(1)]);
        assert!(spectrum(&spec, &cfg, 3.0 * w2, &bad).is_err());
    }

    #[test]
    fn irrational_ratio_is_nondegenerate() {
        let spec = OscillatorSpec::harmonic(vec![1.0, 2f64.sqrt()]).unwrap();
        let t = spectrum(&spec, &REConfig::new(vec![0, 0]).unwrap(), 15.0, &Grouping::default()).unwrap();
        assert!(t.multiplicities().iter().all(|&m| m == 1));
        assert!(t.entries.len() > 50);
    }
}
