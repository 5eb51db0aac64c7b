use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ExtendedSystem, OscillatorSpec, REConfig};
use crate::poly::{hermite, STURM_TOLERANCE};

/// Relative tolerance for deciding that an equation has a real solution.
const CONSISTENCY_TOLERANCE: f64 = 1e-10;

/// Set of real points where one tilde axis hits a zero of its seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PoleLocus {
    /// `normal · p = offset`, with unit `normal` (a point in 1D, a line in 2D, a plane in 3D).
    Hyperplane {
        axis: usize,
        normal: Vec<f64>,
        offset: f64,
    },
    /// An isolated point (2D).
    Point { axis: usize, coordinates: Vec<f64> },
    /// `point + t·direction` with unit `direction` (3D).
    Line {
        axis: usize,
        point: Vec<f64>,
        direction: Vec<f64>,
    },
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

impl PoleLocus {
    pub fn axis(&self) -> usize {
        match self {
            PoleLocus::Hyperplane { axis, .. }
            | PoleLocus::Point { axis, .. }
            | PoleLocus::Line { axis, .. } => *axis,
        }
    }

    /// Euclidean distance from `p` to the locus.
    pub fn distance(&self, p: &[f64]) -> f64 {
        match self {
            PoleLocus::Hyperplane { normal, offset, .. } => (dot(normal, p) - offset).abs(),
            PoleLocus::Point { coordinates, .. } => {
                let d: Vec<f64> = p.iter().zip(coordinates).map(|(a, b)| a - b).collect();
                norm(&d)
            }
            PoleLocus::Line {
                point, direction, ..
            } => {
                let d: Vec<f64> = p.iter().zip(point).map(|(a, b)| a - b).collect();
                let t = dot(&d, direction);
                let perp: Vec<f64> = d.iter().zip(direction).map(|(x, u)| x - t * u).collect();
                norm(&perp)
            }
        }
    }

    /// A real point on the locus, nearest the origin.
    pub fn representative(&self) -> Vec<f64> {
        match self {
            PoleLocus::Hyperplane { normal, offset, .. } => normal.iter().map(|n| n * offset).collect(),
            PoleLocus::Point { coordinates, .. } => coordinates.clone(),
            PoleLocus::Line {
                point, direction, ..
            } => {
                let t = dot(point, direction);
                point.iter().zip(direction).map(|(p, u)| p - t * u).collect()
            }
        }
    }

    fn meets_box(&self, bounds: &[(f64, f64)]) -> bool {
        match self {
            PoleLocus::Hyperplane { normal, offset, .. } => {
                // Range of normal·p over the box.
                let (mut lo, mut hi) = (0.0, 0.0);
                for (n, &(a, b)) in normal.iter().zip(bounds) {
                    lo += f64::min(n * a, n * b);
                    hi += f64::max(n * a, n * b);
                }
                lo <= *offset && *offset <= hi
            }
            PoleLocus::Point { coordinates, .. } => coordinates
                .iter()
                .zip(bounds)
                .all(|(x, &(a, b))| a <= *x && *x <= b),
            PoleLocus::Line {
                point, direction, ..
            } => {
                let (mut t0, mut t1) = (f64::NEG_INFINITY, f64::INFINITY);
                for ((p, u), &(a, b)) in point.iter().zip(direction).zip(bounds) {
                    if u.abs() < 1e-15 {
                        if *p < a || *p > b {
                            return false;
                        }
                    } else {
                        let (s0, s1) = ((a - p) / u, (b - p) / u);
                        t0 = t0.max(s0.min(s1));
                        t1 = t1.min(s0.max(s1));
                    }
                }
                t0 <= t1
            }
        }
    }
}

/// Solve `row · p = target` for real `p`, with complex `row` and `target`.
fn real_solutions(axis: usize, row: &[Complex64], target: Complex64) -> Option<PoleLocus> {
    let r1: Vec<f64> = row.iter().map(|c| c.re).collect();
    let r2: Vec<f64> = row.iter().map(|c| c.im).collect();
    let (c1, c2) = (target.re, target.im);
    let scale = 1.0 + target.norm();
    let (g11, g12, g22) = (dot(&r1, &r1), dot(&r1, &r2), dot(&r2, &r2));
    let det = g11 * g22 - g12 * g12;
    let d = row.len();
    if d >= 2 && det > 1e-12 * (g11 * g22).max(1e-300) {
        // Two independent real equations.
        let y1 = (g22 * c1 - g12 * c2) / det;
        let y2 = (g11 * c2 - g12 * c1) / det;
        let p0: Vec<f64> = r1.iter().zip(&r2).map(|(a, b)| a * y1 + b * y2).collect();
        return Some(if d == 2 {
            PoleLocus::Point {
                axis,
                coordinates: p0,
            }
        } else {
            let cross = vec![
                r1[1] * r2[2] - r1[2] * r2[1],
                r1[2] * r2[0] - r1[0] * r2[2],
                r1[0] * r2[1] - r1[1] * r2[0],
            ];
            let n = norm(&cross);
            PoleLocus::Line {
                axis,
                point: p0,
                direction: cross.iter().map(|x| x / n).collect(),
            }
        });
    }
    // Both parts parallel to a single real direction u.
    let dom = if g11 >= g22 { &r1 } else { &r2 };
    let n = norm(dom);
    let u: Vec<f64> = dom.iter().map(|x| x / n).collect();
    let (a1, a2) = (dot(&r1, &u), dot(&r2, &u));
    if (a1 * c2 - a2 * c1).abs() > CONSISTENCY_TOLERANCE * scale * (a1.abs() + a2.abs()) {
        return None;
    }
    let t = (a1 * c1 + a2 * c2) / (a1 * a1 + a2 * a2);
    Some(PoleLocus::Hyperplane {
        axis,
        normal: u,
        offset: t,
    })
}

/// Zeros of `𝓗_m`: `i·t` for the real roots `t` of `H_m`.
pub fn seed_zeros(m: u32) -> Result<Vec<Complex64>> {
    if m == 0 {
        return Ok(vec![]);
    }
    let h = hermite(m as usize)?;
    let bound = (2.0 * m as f64 + 2.0).sqrt() + 1.0;
    let roots = h.real_roots(-bound, bound, STURM_TOLERANCE)?;
    if roots.len() != m as usize {
        return Err(Error::NoConvergence {
            what: "isolating the zeros of a Hermite polynomial",
            iterations: roots.len(),
        });
    }
    Ok(roots.into_iter().map(|t| Complex64::new(0.0, t)).collect())
}

/// Real pole loci of the extended potential that meet the box `bounds`.
///
/// Axes with a real induced polynomial are scanned with Sturm sequences; the
/// others by solving for real points on each complex zero.
pub fn pole_scan(spec: &OscillatorSpec, config: &REConfig, bounds: &[(f64, f64)]) -> Result<Vec<PoleLocus>> {
    if bounds.len() != spec.dimension() {
        return Err(Error::Shape {
            expected: spec.dimension(),
            found: bounds.len(),
        });
    }
    if bounds.iter().any(|&(a, b)| !(a.is_finite() && b.is_finite() && a < b)) {
        return Err(Error::Domain("each box interval needs lo < hi".into()));
    }
    let sys = ExtendedSystem::new(spec, config)?;
    pole_scan_system(&sys, bounds)
}

pub(crate) fn pole_scan_system(sys: &ExtendedSystem, bounds: &[(f64, f64)]) -> Result<Vec<PoleLocus>> {
    let map = sys.map();
    let mut loci = Vec::new();
    for (axis, ext) in sys.axes().iter().enumerate() {
        if ext.codimension() == 0 {
            continue;
        }
        let row = map.row(axis);
        let shift = map.shift()[axis];
        let scale = ext.scale();
        let row_real = row.iter().all(|c| c.im.abs() <= 1e-15 * c.norm().max(1.0));
        let induced = if row_real {
            // 𝓗_m(scale·(t + shift)) along t = row·p.
            ext.seed()
                .compose_affine(scale, scale * shift)
                .real_coefficients(1e-12)
        } else {
            None
        };
        match induced {
            Some(coeffs) => {
                let rr: Vec<f64> = row.iter().map(|c| c.re).collect();
                let n = norm(&rr);
                let normal: Vec<f64> = rr.iter().map(|x| x / n).collect();
                let (mut lo, mut hi) = (0.0, 0.0);
                for (r, &(a, b)) in rr.iter().zip(bounds) {
                    lo += f64::min(r * a, r * b);
                    hi += f64::max(r * a, r * b);
                }
                let poly = crate::poly::Polynomial::from_real(&coeffs);
                for t in poly.real_roots(lo, hi, STURM_TOLERANCE)? {
                    loci.push(PoleLocus::Hyperplane {
                        axis,
                        normal: normal.clone(),
                        offset: t / n,
                    });
                }
            }
            None => {
                for w in seed_zeros(ext.codimension())? {
                    if let Some(locus) = real_solutions(axis, row, w / scale - shift) {
                        if locus.meets_box(bounds) {
                            loci.push(locus);
                        }
                    }
                }
            }
        }
    }
    Ok(loci)
}

/// Distance from `p` to the nearest locus, infinite when there are none.
pub fn distance_to_poles(loci: &[PoleLocus], p: &[f64]) -> f64 {
    loci.iter()
        .map(|l| l.distance(p))
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::CouplingValue;

    #[test]
    fn one_dimensional_examples() {
        let cfg = REConfig::new(vec![1]).unwrap();
        let s = OscillatorSpec::linear(2.0, CouplingValue::real(1.0)).unwrap();
        let poles = pole_scan(&s, &cfg, &[(-5.0, 5.0)]).unwrap();
        assert_eq!(poles.len(), 1);
        assert!((poles[0].representative()[0] + 0.5).abs() < 1e-12);
        let s = OscillatorSpec::linear(2.0, CouplingValue::imaginary(1.0)).unwrap();
        assert!(pole_scan(&s, &cfg, &[(-5.0, 5.0)]).unwrap().is_empty());
        for m in [2, 4, 6] {
            let cfg = REConfig::new(vec![m]).unwrap();
            let s = OscillatorSpec::linear(1.3, CouplingValue::real(0.7)).unwrap();
            assert!(pole_scan(&s, &cfg, &[(-50.0, 50.0)]).unwrap().is_empty());
        }
        let cfg = REConfig::new(vec![3]).unwrap();
        let s = OscillatorSpec::harmonic(vec![2.0]).unwrap();
        assert_eq!(pole_scan(&s, &cfg, &[(-5.0, 5.0)]).unwrap().len(), 1);
    }

    #[test]
    fn imaginary_shift_meets_a_zero_at_isolated_strength() {
        // 𝓗₂ vanishes at ±i/√2; with ω = 2 that is x̃ = ±i/√2, reached by γ₀ = √2.
        let cfg = REConfig::new(vec![2]).unwrap();
        let s = OscillatorSpec::linear(2.0, CouplingValue::imaginary(2f64.sqrt())).unwrap();
        let poles = pole_scan(&s, &cfg, &[(-5.0, 5.0)]).unwrap();
        assert_eq!(poles.len(), 1);
        assert!(poles[0].representative()[0].abs() < 1e-10);
    }

    #[test]
    fn rotated_imaginary_coupling_has_point_poles() {
        let s = OscillatorSpec::quadratic_2d(1.0, 3.0, CouplingValue::imaginary(7f64.sqrt())).unwrap();
        let cfg = REConfig::new(vec![2, 2]).unwrap();
        let poles = pole_scan(&s, &cfg, &[(-10.0, 10.0), (-10.0, 10.0)]).unwrap();
        assert_eq!(poles.len(), 4);
        assert!(poles.iter().all(|p| matches!(p, PoleLocus::Point { .. })));
        let sys = ExtendedSystem::new(&s, &cfg).unwrap();
        for p in &poles {
            let q = p.representative();
            assert!(sys.potential_real(&q).is_err() || sys.potential_real(&q).unwrap().norm() > 1e8);
        }
        let cfg = REConfig::new(vec![0, 0]).unwrap();
        assert!(pole_scan(&s, &cfg, &[(-10.0, 10.0), (-10.0, 10.0)]).unwrap().is_empty());
    }

    #[test]
    fn locus_geometry() {
        let plane = PoleLocus::Hyperplane { axis: 0, normal: vec![0.6, 0.8], offset: 1.0 };
        assert!((plane.distance(&[0.0, 0.0]) - 1.0).abs() < 1e-15);
        assert!(plane.meets_box(&[(-2.0, 2.0), (-2.0, 2.0)]));
        assert!(!plane.meets_box(&[(-0.1, 0.1), (-0.1, 0.1)]));
        let line = PoleLocus::Line { axis: 0, point: vec![1.0, 0.0, 0.0], direction: vec![0.0, 0.0, 1.0] };
        assert!((line.distance(&[1.0, 2.0, 7.0]) - 2.0).abs() < 1e-15);
        assert!(line.meets_box(&[(0.0, 2.0), (-1.0, 1.0), (-1.0, 1.0)]));
        assert!(!line.meets_box(&[(2.0, 3.0), (-1.0, 1.0), (-1.0, 1.0)]));
        assert_eq!(distance_to_poles(&[], &[0.0]), f64::INFINITY);
    }
}
