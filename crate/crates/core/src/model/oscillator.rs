use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::transform::{
    decouple_3d_lq, decouple_3d_q1, decouple_3d_q2, rotate_map_2d, shift_map_1d, CoordinateMap,
    CouplingValue, DecoupledSystem, Flavor, MapParameters,
};

/// Perturbation added to `¼ Σ ω_i² x_i²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum Perturbation {
    None,
    /// `λ₀ x` (one dimension).
    Linear { lambda0: CouplingValue },
    /// `(λ/2) x y` (two dimensions).
    Quadratic2d { lambda: CouplingValue },
    /// `λ₀ z + (λ/2) x y` (three dimensions).
    #[serde(rename = "lq3d")]
    LinearQuadratic3d {
        lambda0: CouplingValue,
        lambda: CouplingValue,
    },
    /// `½(λ₂ y z + λ₃ z x)` with `ω₁ = ω₂`.
    #[serde(rename = "q1_3d")]
    QuadraticCaseI {
        lambda2: CouplingValue,
        lambda3: CouplingValue,
    },
    /// `½(λ₁ x y + λ (y z + z x))` with `ω₁ = ω₂` and real `λ₁`.
    #[serde(rename = "q2_3d")]
    QuadraticCaseII {
        lambda1: CouplingValue,
        lambda: CouplingValue,
    },
}

impl Perturbation {
    pub fn name(&self) -> &'static str {
        match self {
            Perturbation::None => "none",
            Perturbation::Linear { .. } => "linear",
            Perturbation::Quadratic2d { .. } => "quadratic2d",
            Perturbation::LinearQuadratic3d { .. } => "lq3d",
            Perturbation::QuadraticCaseI { .. } => "q1_3d",
            Perturbation::QuadraticCaseII { .. } => "q2_3d",
        }
    }

    pub fn couplings(&self) -> Vec<CouplingValue> {
        match *self {
            Perturbation::None => vec![],
            Perturbation::Linear { lambda0 } => vec![lambda0],
            Perturbation::Quadratic2d { lambda } => vec![lambda],
            Perturbation::LinearQuadratic3d { lambda0, lambda } => vec![lambda0, lambda],
            Perturbation::QuadraticCaseI { lambda2, lambda3 } => vec![lambda2, lambda3],
            Perturbation::QuadraticCaseII { lambda1, lambda } => vec![lambda1, lambda],
        }
    }
}

#[derive(Deserialize)]
struct RawSpec {
    frequencies: Vec<f64>,
    perturbation: Perturbation,
}

/// A (possibly perturbed) oscillator in one to three dimensions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct OscillatorSpec {
    frequencies: Vec<f64>,
    perturbation: Perturbation,
}

impl TryFrom<RawSpec> for OscillatorSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        OscillatorSpec::new(raw.frequencies, raw.perturbation)
    }
}

impl OscillatorSpec {
    pub fn new(frequencies: Vec<f64>, perturbation: Perturbation) -> Result<Self> {
        let dim = frequencies.len();
        if !(1..=3).contains(&dim) {
            return Err(Error::Domain(format!("dimension must be 1..=3, got {dim}")));
        }
        for (i, &w) in frequencies.iter().enumerate() {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::Domain(format!(
                    "frequency ω{} must be positive and finite, got {w}",
                    i + 1
                )));
            }
        }
        let need = |d: usize| -> Result<()> {
            if dim != d {
                return Err(Error::Domain(format!(
                    "perturbation '{}' needs {d} frequencies, got {dim}",
                    perturbation.name()
                )));
            }
            Ok(())
        };
        match perturbation {
            Perturbation::None => {}
            Perturbation::Linear { .. } => need(1)?,
            Perturbation::Quadratic2d { .. } => need(2)?,
            Perturbation::LinearQuadratic3d { .. } => need(3)?,
            Perturbation::QuadraticCaseI { .. } | Perturbation::QuadraticCaseII { .. } => {
                need(3)?;
                if frequencies[0] != frequencies[1] {
                    return Err(Error::Domain(format!(
                        "perturbation '{}' needs ω₁ = ω₂, got {} and {}",
                        perturbation.name(),
                        frequencies[0],
                        frequencies[1]
                    )));
                }
            }
        }
        if let Perturbation::QuadraticCaseII { lambda1, .. } = perturbation {
            if lambda1.flavor == Flavor::Imaginary && lambda1.value != 0.0 {
                return Err(Error::Domain(
                    "λ₁ must be real in the equal-cross-coupling case".into(),
                ));
            }
        }
        for c in perturbation.couplings() {
            if !c.value.is_finite() {
                return Err(Error::Domain("couplings must be finite".into()));
            }
        }
        Ok(Self {
            frequencies,
            perturbation,
        })
    }

    pub fn harmonic(frequencies: Vec<f64>) -> Result<Self> {
        Self::new(frequencies, Perturbation::None)
    }

    pub fn linear(omega: f64, lambda0: CouplingValue) -> Result<Self> {
        Self::new(vec![omega], Perturbation::Linear { lambda0 })
    }

    pub fn quadratic_2d(omega1: f64, omega2: f64, lambda: CouplingValue) -> Result<Self> {
        Self::new(vec![omega1, omega2], Perturbation::Quadratic2d { lambda })
    }

    pub fn linear_quadratic_3d(
        omegas: [f64; 3],
        lambda0: CouplingValue,
        lambda: CouplingValue,
    ) -> Result<Self> {
        Self::new(
            omegas.to_vec(),
            Perturbation::LinearQuadratic3d { lambda0, lambda },
        )
    }

    pub fn quadratic_case_i(
        omega: f64,
        omega3: f64,
        lambda2: CouplingValue,
        lambda3: CouplingValue,
    ) -> Result<Self> {
        Self::new(
            vec![omega, omega, omega3],
            Perturbation::QuadraticCaseI { lambda2, lambda3 },
        )
    }

    pub fn quadratic_case_ii(
        omega: f64,
        omega3: f64,
        lambda1: f64,
        lambda: CouplingValue,
    ) -> Result<Self> {
        Self::new(
            vec![omega, omega, omega3],
            Perturbation::QuadraticCaseII {
                lambda1: CouplingValue::real(lambda1),
                lambda,
            },
        )
    }

    pub fn dimension(&self) -> usize {
        self.frequencies.len()
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn perturbation(&self) -> &Perturbation {
        &self.perturbation
    }

    /// True when every coupling is real, i.e. the potential is real on real points.
    pub fn is_hermitian(&self) -> bool {
        self.perturbation.couplings().iter().all(|c| !c.is_imaginary())
    }

    fn check_point<T>(&self, p: &[T]) -> Result<()> {
        if p.len() != self.dimension() {
            return Err(Error::Shape {
                expected: self.dimension(),
                found: p.len(),
            });
        }
        Ok(())
    }

    /// The perturbed potential evaluated literally in the original coordinates.
    pub fn base_potential(&self, p: &[Complex64]) -> Result<Complex64> {
        self.check_point(p)?;
        let w = &self.frequencies;
        let harmonic: Complex64 = w.iter().zip(p).map(|(w, x)| 0.25 * w * w * x * x).sum();
        let extra = match self.perturbation {
            Perturbation::None => Complex64::new(0.0, 0.0),
            Perturbation::Linear { lambda0 } => lambda0.as_complex() * p[0],
            Perturbation::Quadratic2d { lambda } => 0.5 * lambda.as_complex() * p[0] * p[1],
            Perturbation::LinearQuadratic3d { lambda0, lambda } => {
                lambda0.as_complex() * p[2] + 0.5 * lambda.as_complex() * p[0] * p[1]
            }
            Perturbation::QuadraticCaseI { lambda2, lambda3 } => {
                0.5 * (lambda2.as_complex() * p[1] * p[2] + lambda3.as_complex() * p[2] * p[0])
            }
            Perturbation::QuadraticCaseII { lambda1, lambda } => {
                0.5 * (lambda1.as_complex() * p[0] * p[1]
                    + lambda.as_complex() * (p[1] * p[2] + p[2] * p[0]))
            }
        };
        Ok(harmonic + extra)
    }

    pub fn base_potential_real(&self, p: &[f64]) -> Result<Complex64> {
        let z: Vec<Complex64> = p.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.base_potential(&z)
    }

    /// Build the decoupling transform for this perturbation.
    pub fn decouple(&self) -> Result<DecoupledSystem> {
        let w = &self.frequencies;
        match self.perturbation {
            Perturbation::None => Ok(DecoupledSystem {
                tilde_frequencies: w.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
                potential_constant: Complex64::new(0.0, 0.0),
                map: CoordinateMap::identity(w.len()),
                parameters: MapParameters::default(),
            }),
            Perturbation::Linear { lambda0 } => shift_map_1d(w[0], lambda0),
            Perturbation::Quadratic2d { lambda } => rotate_map_2d(w[0], w[1], lambda),
            Perturbation::LinearQuadratic3d { lambda0, lambda } => {
                decouple_3d_lq(w[0], w[1], w[2], lambda0, lambda)
            }
            Perturbation::QuadraticCaseI { lambda2, lambda3 } => {
                decouple_3d_q1(w[0], w[2], lambda2, lambda3)
            }
            Perturbation::QuadraticCaseII { lambda1, lambda } => {
                decouple_3d_q2(w[0], w[2], lambda1, lambda)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn base_potential_examples() {
        let s = OscillatorSpec::quadratic_2d(1.0, 2.0, CouplingValue::real(7f64.sqrt() / 2.0)).unwrap();
        assert!((s.base_potential_real(&[2.0, 0.0]).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        let s = OscillatorSpec::quadratic_2d(1.0, 3.0, CouplingValue::imaginary(7f64.sqrt())).unwrap();
        let v = s.base_potential_real(&[1.0, 1.0]).unwrap();
        assert!((v - c(2.5, 7f64.sqrt() / 2.0)).norm() < 1e-15);
        let specs = [
            OscillatorSpec::linear(2.0, CouplingValue::imaginary(1.0)).unwrap(),
            OscillatorSpec::quadratic_case_i(1.0, 2.0, CouplingValue::real(0.3), CouplingValue::imaginary(0.2)).unwrap(),
            OscillatorSpec::quadratic_case_ii(1.0, 2.0, 0.4, CouplingValue::real(0.3)).unwrap(),
        ];
        for s in &specs {
            let origin = vec![0.0; s.dimension()];
            assert_eq!(s.base_potential_real(&origin).unwrap(), c(0.0, 0.0));
        }
        assert!(matches!(
            specs[0].base_potential_real(&[1.0, 2.0]),
            Err(Error::Shape { .. })
        ));
    }

    #[test]
    fn validation() {
        assert!(OscillatorSpec::harmonic(vec![]).is_err());
        assert!(OscillatorSpec::harmonic(vec![1.0, -1.0]).is_err());
        assert!(OscillatorSpec::new(vec![1.0, 2.0], Perturbation::Linear { lambda0: CouplingValue::zero() }).is_err());
        assert!(OscillatorSpec::new(
            vec![1.0, 2.0, 3.0],
            Perturbation::QuadraticCaseI { lambda2: CouplingValue::real(1.0), lambda3: CouplingValue::real(1.0) }
        )
        .is_err());
        assert!(OscillatorSpec::new(
            vec![1.0, 1.0, 3.0],
            Perturbation::QuadraticCaseII { lambda1: CouplingValue::imaginary(1.0), lambda: CouplingValue::real(1.0) }
        )
        .is_err());
    }

    #[test]
    fn serde_round_trip() {
        let s = OscillatorSpec::linear_quadratic_3d(
            [1.0, 2.0, 5.0],
            CouplingValue::imaginary(1.0),
            CouplingValue::real(1.5),
        )
        .unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.contains("\"case\":\"lq3d\""));
        assert!(json.contains("\"imaginary:1\""));
        let back: OscillatorSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        let bad = r#"{"frequencies":[1.0,2.0],"perturbation":{"case":"linear","lambda0":"real:1"}}"#;
        assert!(serde_json::from_str::<OscillatorSpec>(bad).is_err());
    }
}
