use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{OscillatorSpec, Perturbation};

/// Number of random points used to test `V(P·p)* = V(p)`.
pub const PT_SAMPLE_COUNT: usize = 100;
/// Relative tolerance of the sampled symmetry test.
pub const PT_SAMPLE_TOLERANCE: f64 = 1e-10;
const PT_SAMPLE_SEED: u64 = 0x5054_7379_6d6d;
const PT_SAMPLE_RADIUS: f64 = 3.0;

/// A signed-permutation matrix acting on coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParityOperator {
    pub name: String,
    dimension: usize,
    matrix: Vec<f64>,
}

impl ParityOperator {
    fn new(name: &str, dimension: usize, matrix: Vec<f64>) -> Self {
        debug_assert_eq!(matrix.len(), dimension * dimension);
        Self {
            name: name.to_string(),
            dimension,
            matrix,
        }
    }

    fn diagonal(name: &str, signs: &[f64]) -> Self {
        let d = signs.len();
        let mut m = vec![0.0; d * d];
        for (i, &s) in signs.iter().enumerate() {
            m[i * d + i] = s;
        }
        Self::new(name, d, m)
    }

    /// The identity, named "I"; with it the PT test reduces to reality of `V`.
    pub fn identity(dimension: usize) -> Self {
        Self::diagonal("I", &vec![1.0; dimension])
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.matrix[i * self.dimension + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.matrix.chunks(self.dimension).map(|r| r.to_vec()).collect()
    }

    pub fn determinant(&self) -> f64 {
        let m = |i, j| self.entry(i, j);
        match self.dimension {
            1 => m(0, 0),
            2 => m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0),
            _ => {
                m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
                    - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
                    + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
            }
        }
    }

    pub fn apply(&self, p: &[f64]) -> Vec<f64> {
        (0..self.dimension)
            .map(|i| (0..self.dimension).map(|j| self.entry(i, j) * p[j]).sum())
            .collect()
    }

    pub fn apply_complex(&self, p: &[Complex64]) -> Vec<Complex64> {
        (0..self.dimension)
            .map(|i| (0..self.dimension).map(|j| self.entry(i, j) * p[j]).sum())
            .collect()
    }
}

/// The reflection `x → −x` in one dimension.
pub(crate) fn parity_1d() -> ParityOperator {
    ParityOperator::diagonal("P", &[-1.0])
}

/// Catalogue of parity operators `P₁…P₄` in two or three dimensions.
pub fn parity_operators(dimension: usize) -> Result<Vec<ParityOperator>> {
    match dimension {
        2 => Ok(vec![
            ParityOperator::diagonal("P1", &[-1.0, 1.0]),
            ParityOperator::diagonal("P2", &[1.0, -1.0]),
            ParityOperator::new("P3", 2, vec![0.0, 1.0, 1.0, 0.0]),
            ParityOperator::new("P4", 2, vec![0.0, -1.0, -1.0, 0.0]),
        ]),
        3 => Ok(vec![
            ParityOperator::diagonal("P1", &[-1.0, 1.0, 1.0]),
            ParityOperator::diagonal("P2", &[1.0, 1.0, -1.0]),
            ParityOperator::diagonal("P3", &[1.0, -1.0, 1.0]),
            ParityOperator::diagonal("P4", &[-1.0, -1.0, -1.0]),
        ]),
        d => Err(Error::Domain(format!(
            "parity catalogue exists for dimensions 2 and 3, got {d}"
        ))),
    }
}

fn catalogue(dimension: usize) -> Vec<ParityOperator> {
    if dimension == 1 {
        vec![parity_1d()]
    } else {
        parity_operators(dimension).expect("dimension validated by OscillatorSpec")
    }
}

/// PT structure of a potential.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PtClassification {
    /// The potential is real on real points, so `T` alone is a symmetry.
    pub potential_real: bool,
    /// Operators tabulated for this flavour combination (empty for real potentials).
    pub assigned: Vec<ParityOperator>,
    /// Catalogue operators that pass the sampled test `V(P·p)* = V(p)`.
    pub symmetric: Vec<ParityOperator>,
}

impl PtClassification {
    /// Tabulated operators that fail the sampled test.
    pub fn unconfirmed(&self) -> Vec<&ParityOperator> {
        self.assigned
            .iter()
            .filter(|p| !self.symmetric.iter().any(|s| s.name == p.name))
            .collect()
    }
}

fn assigned_names(spec: &OscillatorSpec) -> Vec<&'static str> {
    match *spec.perturbation() {
        Perturbation::None => vec![],
        Perturbation::Linear { lambda0 } => {
            if lambda0.is_imaginary() {
                vec!["P"]
            } else {
                vec![]
            }
        }
        Perturbation::Quadratic2d { lambda } => {
            if lambda.is_imaginary() {
                vec!["P1", "P2"]
            } else {
                vec![]
            }
        }
        Perturbation::LinearQuadratic3d { lambda0, lambda } => {
            match (lambda0.is_imaginary(), lambda.is_imaginary()) {
                (false, false) => vec![],
                (true, false) => vec!["P2"],
                (false, true) => vec!["P1", "P3"],
                (true, true) => vec!["P4"],
            }
        }
        Perturbation::QuadraticCaseI { lambda2, lambda3 } => {
            match (lambda2.is_imaginary(), lambda3.is_imaginary()) {
                (false, false) => vec![],
                (true, false) => vec!["P3"],
                (false, true) => vec!["P1"],
                (true, true) => vec!["P2"],
            }
        }
        Perturbation::QuadraticCaseII { lambda, .. } => {
            if lambda.is_imaginary() {
                vec!["P2"]
            } else {
                vec![]
            }
        }
    }
}

/// Largest relative deviation of `V(P·p)*` from `V(p)` over the fixed sample set.
pub(crate) fn pt_deviation(spec: &OscillatorSpec, parity: &ParityOperator) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(PT_SAMPLE_SEED);
    let d = spec.dimension();
    let mut worst = 0.0f64;
    for _ in 0..PT_SAMPLE_COUNT {
        let p: Vec<f64> = (0..d)
            .map(|_| rng.random_range(-PT_SAMPLE_RADIUS..PT_SAMPLE_RADIUS))
            .collect();
        let v = spec.base_potential_real(&p).expect("dimension matches");
        let vp = spec
            .base_potential_real(&parity.apply(&p))
            .expect("dimension matches");
        worst = worst.max((vp.conj() - v).norm() / (1.0 + v.norm()));
    }
    worst
}

/// Tabulated PT parity operators for `spec`, cross-checked by sampling.
pub fn pt_classification(spec: &OscillatorSpec) -> PtClassification {
    let all = catalogue(spec.dimension());
    let names = assigned_names(spec);
    let assigned = all
        .iter()
        .filter(|p| names.contains(&p.name.as_str()))
        .cloned()
        .collect();
    let symmetric = all
        .into_iter()
        .filter(|p| pt_deviation(spec, p) <= PT_SAMPLE_TOLERANCE)
        .collect();
    PtClassification {
        potential_real: spec.is_hermitian(),
        assigned,
        symmetric,
    }
}

/// The 2×2 metric `[[−k, −√(1−k²)], [√(1−k²), −k]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EtaMetric {
    pub matrix: [[Complex64; 2]; 2],
}

impl EtaMetric {
    pub fn apply(&self, p: &[Complex64]) -> [Complex64; 2] {
        let m = &self.matrix;
        [m[0][0] * p[0] + m[0][1] * p[1], m[1][0] * p[0] + m[1][1] * p[1]]
    }

    pub fn determinant(&self) -> Complex64 {
        let m = &self.matrix;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn inverse(&self) -> EtaMetric {
        let m = &self.matrix;
        let det = self.determinant();
        EtaMetric {
            matrix: [
                [m[1][1] / det, -m[0][1] / det],
                [-m[1][0] / det, m[0][0] / det],
            ],
        }
    }

    pub fn identity() -> EtaMetric {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        EtaMetric {
            matrix: [[one, zero], [zero, one]],
        }
    }
}

pub fn eta_metric_2d(k: Complex64) -> EtaMetric {
    let s = (Complex64::new(1.0, 0.0) - k * k).sqrt();
    EtaMetric {
        matrix: [[-k, -s], [s, -k]],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::CouplingValue;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn names(v: &[ParityOperator]) -> Vec<&str> {
        v.iter().map(|p| p.name.as_str()).collect()
    }

    #[test]
    fn catalogue_matrices() {
        let p2 = parity_operators(2).unwrap();
        assert_eq!(p2[0].rows(), vec![vec![-1.0, 0.0], vec![0.0, 1.0]]);
        for p in p2.iter().chain(parity_operators(3).unwrap().iter()) {
            assert_eq!(p.determinant(), -1.0, "{}", p.name);
        }
        let p3 = parity_operators(3).unwrap();
        assert_eq!(p3[3].apply(&[1.0, 2.0, 3.0]), vec![-1.0, -2.0, -3.0]);
        assert!(parity_operators(1).is_err());
        assert!(parity_operators(4).is_err());
    }

    #[test]
    fn eta_examples() {
        let e = eta_metric_2d(c(0.0, 0.0));
        assert_eq!(e.matrix, [[c(-0.0, -0.0), c(-1.0, 0.0)], [c(1.0, 0.0), c(-0.0, -0.0)]]);
        let e = eta_metric_2d(c(-4.0 / 3.0, 0.0));
        let s = 7f64.sqrt() / 3.0;
        assert!((e.matrix[0][0] - c(4.0 / 3.0, 0.0)).norm() < 1e-15);
        assert!((e.matrix[0][1] - c(0.0, -s)).norm() < 1e-15);
        assert!((e.matrix[1][0] - c(0.0, s)).norm() < 1e-15);
        let e = eta_metric_2d(c(1.0, 0.0));
        assert_eq!(e.matrix[0][0], c(-1.0, 0.0));
        assert_eq!(e.matrix[0][1].norm(), 0.0);
        assert_eq!(e.matrix[1][1], c(-1.0, 0.0));
        let prod = {
            let i = e.inverse();
            i.apply(&e.apply(&[c(0.3, 0.1), c(-1.0, 2.0)]))
        };
        assert!((prod[0] - c(0.3, 0.1)).norm() < 1e-15);
    }

    #[test]
    fn tabulated_parities() {
        let s = OscillatorSpec::quadratic_2d(1.0, 3.0, CouplingValue::imaginary(7f64.sqrt())).unwrap();
        let pt = pt_classification(&s);
        assert!(!pt.potential_real);
        assert_eq!(names(&pt.assigned), vec!["P1", "P2"]);
        assert_eq!(names(&pt.symmetric), vec!["P1", "P2"]);

        let s = OscillatorSpec::linear(2.0, CouplingValue::imaginary(1.0)).unwrap();
        assert_eq!(names(&pt_classification(&s).symmetric), vec!["P"]);

        let lq = |l0, l| OscillatorSpec::linear_quadratic_3d([1.0, 2.0, 5.0], l0, l).unwrap();
        let pt = pt_classification(&lq(CouplingValue::imaginary(1.0), CouplingValue::real(0.5)));
        assert_eq!(names(&pt.assigned), vec!["P2"]);
        assert!(pt.unconfirmed().is_empty());
        let pt = pt_classification(&lq(CouplingValue::real(1.0), CouplingValue::imaginary(0.5)));
        assert_eq!(names(&pt.assigned), vec!["P1", "P3"]);
        assert_eq!(names(&pt.symmetric), vec!["P1", "P3"]);
        let pt = pt_classification(&lq(CouplingValue::imaginary(1.0), CouplingValue::imaginary(0.5)));
        assert_eq!(names(&pt.assigned), vec!["P4"]);
        // Space inversion leaves i·λ·xy/2 unchanged while conjugation flips it.
        assert_eq!(pt.unconfirmed().iter().map(|p| p.name.as_str()).collect::<Vec<_>>(), vec!["P4"]);
        let pt = pt_classification(&lq(CouplingValue::real(1.0), CouplingValue::real(0.5)));
        assert!(pt.potential_real && pt.assigned.is_empty());

        let q1 = |l2, l3| OscillatorSpec::quadratic_case_i(1.0, 2.0, l2, l3).unwrap();
        let im = CouplingValue::imaginary(0.3);
        let re = CouplingValue::real(0.4);
        assert_eq!(names(&pt_classification(&q1(im, re)).symmetric), vec!["P3"]);
        assert_eq!(names(&pt_classification(&q1(re, im)).symmetric), vec!["P1"]);
        assert_eq!(names(&pt_classification(&q1(im, im)).symmetric), vec!["P2"]);

        let s = OscillatorSpec::quadratic_case_ii(1.0, 2.0, 0.3, im).unwrap();
        let pt = pt_classification(&s);
        assert_eq!(names(&pt.assigned), vec!["P2"]);
        assert!(pt.unconfirmed().is_empty());
    }
}
