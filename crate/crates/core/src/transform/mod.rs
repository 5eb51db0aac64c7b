//! Decoupling transforms: coordinate shifts and complex rotations that turn
//! a perturbed oscillator into independent one-dimensional oscillators,
//! plus the reality, degeneracy, parity and metric machinery built on them.

mod degeneracy;
mod maps;
mod parity;
mod reality;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use degeneracy::{degeneracy_coupling_2d, degeneracy_coupling_3d, DegeneracyCase};
pub use maps::{
    decouple_3d_lq, decouple_3d_q1, decouple_3d_q2, rotate_map_2d, shift_map_1d,
    tilde_frequencies_2d, tilde_frequencies_q1, tilde_frequencies_q2,
};
pub use parity::{
    eta_metric_2d, parity_operators, pt_classification, EtaMetric, ParityOperator,
    PtClassification,
};
#[cfg(test)]
pub(crate) use parity::parity_1d;
pub use parity::{PT_SAMPLE_COUNT, PT_SAMPLE_TOLERANCE};
pub use reality::{spectral_reality, spectral_reality_2d, spectral_reality_3d, RealityVerdict};

/// Entrywise tolerance for the complex-orthogonality check.
pub const ORTHOGONALITY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Real,
    Imaginary,
}

/// A perturbation strength that is either real or purely imaginary.
///
/// `value` is signed: `imaginary` with value `-2` stands for `-2i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingValue {
    pub value: f64,
    pub flavor: Flavor,
}

impl CouplingValue {
    pub fn real(value: f64) -> Self {
        Self {
            value,
            flavor: Flavor::Real,
        }
    }

    pub fn imaginary(value: f64) -> Self {
        Self {
            value,
            flavor: Flavor::Imaginary,
        }
    }

    pub fn zero() -> Self {
        Self::real(0.0)
    }

    pub fn as_complex(&self) -> Complex64 {
        match self.flavor {
            Flavor::Real => Complex64::new(self.value, 0.0),
            Flavor::Imaginary => Complex64::new(0.0, self.value),
        }
    }

    pub fn magnitude(&self) -> f64 {
        self.value.abs()
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0.0
    }

    pub fn is_imaginary(&self) -> bool {
        self.flavor == Flavor::Imaginary && self.value != 0.0
    }

    /// Square of the coupling; real for either flavor.
    pub fn squared(&self) -> f64 {
        match self.flavor {
            Flavor::Real => self.value * self.value,
            Flavor::Imaginary => -self.value * self.value,
        }
    }
}

impl fmt::Display for CouplingValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.flavor {
            Flavor::Real => "real",
            Flavor::Imaginary => "imaginary",
        };
        write!(f, "{tag}:{}", self.value)
    }
}

impl FromStr for CouplingValue {
    type Err = Error;

    /// Parses `real:<v>`, `imaginary:<v>` (also `imag:`/`i:`), or a bare number as real.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (flavor, num) = match s.split_once(':') {
            Some((tag, rest)) => {
                let flavor = match tag.trim().to_ascii_lowercase().as_str() {
                    "real" | "r" => Flavor::Real,
                    "imaginary" | "imag" | "i" => Flavor::Imaginary,
                    other => {
                        return Err(Error::Domain(format!("unknown coupling flavor '{other}'")))
                    }
                };
                (flavor, rest.trim())
            }
            None => (Flavor::Real, s),
        };
        let value: f64 = num
            .parse()
            .map_err(|_| Error::Domain(format!("cannot parse coupling value '{num}'")))?;
        if !value.is_finite() {
            return Err(Error::Domain(format!("coupling must be finite, got {value}")));
        }
        Ok(Self { value, flavor })
    }
}

impl Serialize for CouplingValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CouplingValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Affine map from old to tilde coordinates: `tilde = linear · p + shift`.
///
/// `linear` is complex orthogonal under the bilinear (non-conjugated) form,
/// which keeps the Laplacian invariant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoordinateMap {
    dimension: usize,
    linear: Vec<Complex64>,
    shift: Vec<Complex64>,
}

impl CoordinateMap {
    pub fn new(dimension: usize, linear: Vec<Complex64>, shift: Vec<Complex64>) -> Result<Self> {
        if !(1..=3).contains(&dimension) {
            return Err(Error::Domain(format!("dimension must be 1..=3, got {dimension}")));
        }
        if linear.len() != dimension * dimension {
            return Err(Error::Shape {
                expected: dimension * dimension,
                found: linear.len(),
            });
        }
        if shift.len() != dimension {
            return Err(Error::Shape {
                expected: dimension,
                found: shift.len(),
            });
        }
        Ok(Self {
            dimension,
            linear,
            shift,
        })
    }

    pub fn identity(dimension: usize) -> Self {
        let mut linear = vec![Complex64::new(0.0, 0.0); dimension * dimension];
        for i in 0..dimension {
            linear[i * dimension + i] = Complex64::new(1.0, 0.0);
        }
        Self {
            dimension,
            linear,
            shift: vec![Complex64::new(0.0, 0.0); dimension],
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Row `i` of the linear part: coefficients of the old coordinates in tilde axis `i`.
    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.linear[i * self.dimension..(i + 1) * self.dimension]
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.linear[i * self.dimension + j]
    }

    pub fn shift(&self) -> &[Complex64] {
        &self.shift
    }

    /// Old coordinates to tilde coordinates.
    pub fn forward(&self, p: &[Complex64]) -> Vec<Complex64> {
        (0..self.dimension)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(p)
                    .map(|(a, x)| a * x)
                    .sum::<Complex64>()
                    + self.shift[i]
            })
            .collect()
    }

    /// Single tilde coordinate of a real point.
    pub fn forward_axis_real(&self, axis: usize, p: &[f64]) -> Complex64 {
        self.row(axis)
            .iter()
            .zip(p)
            .map(|(a, &x)| a * x)
            .sum::<Complex64>()
            + self.shift[axis]
    }

    /// Tilde coordinates back to old coordinates, using the transpose as inverse.
    pub fn inverse(&self, tilde: &[Complex64]) -> Vec<Complex64> {
        let d = self.dimension;
        (0..d)
            .map(|j| (0..d).map(|i| self.entry(i, j) * (tilde[i] - self.shift[i])).sum())
            .collect()
    }

    /// Largest entry of `|Mᵀ M - I|`.
    pub fn orthogonality_defect(&self) -> f64 {
        let d = self.dimension;
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let g: Complex64 = (0..d).map(|r| self.entry(r, i) * self.entry(r, j)).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - target).norm());
            }
        }
        worst
    }
}

/// Named transform parameters, where the construction defines them.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MapParameters {
    pub k: Option<Complex64>,
    pub a: Option<Complex64>,
    pub b: Option<Complex64>,
    pub c: Option<Complex64>,
    pub d: Option<Complex64>,
}

/// Independent oscillators in tilde coordinates:
/// `V = ¼ Σ ω̃_i² x̃_i² + potential_constant`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecoupledSystem {
    pub tilde_frequencies: Vec<Complex64>,
    pub potential_constant: Complex64,
    pub map: CoordinateMap,
    pub parameters: MapParameters,
}

impl DecoupledSystem {
    pub fn dimension(&self) -> usize {
        self.map.dimension()
    }

    /// True when every tilde frequency is real and non-negative within `tol`.
    pub fn frequencies_real(&self, tol: f64) -> bool {
        self.tilde_frequencies
            .iter()
            .all(|w| w.im.abs() <= tol * w.norm().max(1.0) && w.re >= -tol)
    }

    /// `¼ Σ ω̃_i² x̃_i² + constant` at tilde coordinates.
    pub fn tilde_potential(&self, tilde: &[Complex64]) -> Complex64 {
        self.tilde_frequencies
            .iter()
            .zip(tilde)
            .map(|(w, x)| 0.25 * w * w * x * x)
            .sum::<Complex64>()
            + self.potential_constant
    }

    /// Largest real part among the tilde frequencies' smallest; used for box sizing.
    pub fn min_frequency(&self) -> f64 {
        self.tilde_frequencies
            .iter()
            .map(|w| w.re)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_frequency_norm(&self) -> f64 {
        self.tilde_frequencies.iter().map(|w| w.norm()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coupling_parsing_and_display() {
        let c: CouplingValue = "real:1.3229".parse().unwrap();
        assert_eq!(c, CouplingValue::real(1.3229));
        let i: CouplingValue = "imaginary:-2".parse().unwrap();
        assert_eq!(i.as_complex(), Complex64::new(0.0, -2.0));
        assert_eq!(i.squared(), -4.0);
        assert_eq!("0.5".parse::<CouplingValue>().unwrap(), CouplingValue::real(0.5));
        assert!("complex:1".parse::<CouplingValue>().is_err());
        assert!("real:abc".parse::<CouplingValue>().is_err());
        assert_eq!(i.to_string(), "imaginary:-2");
        assert_eq!(i.to_string().parse::<CouplingValue>().unwrap(), i);
    }

    #[test]
    fn identity_map_is_orthogonal() {
        for d in 1..=3 {
            let m = CoordinateMap::identity(d);
            assert_eq!(m.orthogonality_defect(), 0.0);
        }
        assert!(CoordinateMap::new(4, vec![], vec![]).is_err());
        assert!(CoordinateMap::new(2, vec![Complex64::new(1.0, 0.0); 3], vec![]).is_err());
    }
}
