use serde::{Deserialize, Serialize};

use super::maps::check_frequency;
use super::CouplingValue;
use crate::error::{Error, Result};
use crate::model::{OscillatorSpec, Perturbation};

/// Relative slack on non-strict inequalities, absorbing rounding at the boundary.
const BOUNDARY_SLACK: f64 = 1e-12;

/// One inequality of a reality condition and whether it held.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub condition: String,
    pub satisfied: bool,
}

/// Outcome of a spectral-reality test with the inequalities that were checked.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealityVerdict {
    pub real: bool,
    pub checks: Vec<ConditionCheck>,
}

impl RealityVerdict {
    fn from_checks(checks: Vec<ConditionCheck>) -> Self {
        Self {
            real: checks.iter().all(|c| c.satisfied),
            checks,
        }
    }

    /// The first violated inequality, if any.
    pub fn violated(&self) -> Option<&str> {
        self.checks
            .iter()
            .find(|c| !c.satisfied)
            .map(|c| c.condition.as_str())
    }
}

fn check(condition: &str, satisfied: bool) -> ConditionCheck {
    ConditionCheck {
        condition: condition.to_string(),
        satisfied,
    }
}

fn le(lhs: f64, rhs: f64) -> bool {
    lhs <= rhs + BOUNDARY_SLACK * lhs.abs().max(rhs.abs()).max(1.0)
}

fn checks_2d(omega1: f64, omega2: f64, lambda: CouplingValue) -> Vec<ConditionCheck> {
    if lambda.is_imaginary() {
        let half_gap = 0.5 * (omega1 * omega1 - omega2 * omega2).abs();
        vec![check(
            "imaginary coupling: |γ| < ½|ω₁² − ω₂²|",
            lambda.magnitude() < half_gap,
        )]
    } else {
        vec![check(
            "real coupling: |λ| ≤ ω₁ω₂",
            le(lambda.magnitude(), omega1 * omega2),
        )]
    }
}

/// Whether the 2D quadratically coupled oscillator has a real spectrum.
pub fn spectral_reality_2d(omega1: f64, omega2: f64, lambda: CouplingValue) -> bool {
    RealityVerdict::from_checks(checks_2d(omega1, omega2, lambda)).real
}

/// Reality verdict for any supported oscillator.
pub fn spectral_reality(spec: &OscillatorSpec) -> Result<RealityVerdict> {
    let w = spec.frequencies();
    for (i, &x) in w.iter().enumerate() {
        check_frequency(&format!("ω{}", i + 1), x)?;
    }
    let checks = match *spec.perturbation() {
        Perturbation::None => vec![],
        Perturbation::Linear { .. } => vec![check("linear shift: spectrum real for either flavor", true)],
        Perturbation::Quadratic2d { lambda } => checks_2d(w[0], w[1], lambda),
        Perturbation::LinearQuadratic3d { lambda, .. } => checks_2d(w[0], w[1], lambda),
        Perturbation::QuadraticCaseI { lambda2, lambda3 } => {
            let (om, om3) = (w[0], w[2]);
            let s = lambda2.squared() + lambda3.squared();
            let gap = om * om - om3 * om3;
            vec![
                check(
                    "−¼(ω² − ω₃²)² ≤ λ₂² + λ₃²",
                    le(-0.25 * gap * gap, s),
                ),
                check("λ₂² + λ₃² ≤ ω²ω₃²", le(s, om * om * om3 * om3)),
            ]
        }
        Perturbation::QuadraticCaseII { lambda1, lambda } => {
            if lambda1.is_imaginary() {
                return Err(Error::Domain(
                    "λ₁ must be real in the equal-cross-coupling case".into(),
                ));
            }
            let (om, om3, l1) = (w[0], w[2], lambda1.value);
            let mut checks = vec![
                check("−ω² ≤ λ₁", le(-om * om, l1)),
                check("λ₁ ≤ ω²", le(l1, om * om)),
            ];
            if lambda.is_imaginary() {
                let gap = om * om - om3 * om3 + l1;
                checks.push(check(
                    "γ² ≤ (ω² − ω₃² + λ₁)²/8",
                    le(lambda.value * lambda.value, gap * gap / 8.0),
                ));
            } else {
                checks.push(check(
                    "2λ² ≤ (ω² + λ₁)ω₃²",
                    le(2.0 * lambda.value * lambda.value, (om * om + l1) * om3 * om3),
                ));
            }
            checks
        }
    };
    Ok(RealityVerdict::from_checks(checks))
}

/// Reality verdict for the three-dimensional cases, with the checked inequalities.
pub fn spectral_reality_3d(spec: &OscillatorSpec) -> Result<RealityVerdict> {
    if spec.dimension() != 3 {
        return Err(Error::Domain(format!(
            "expected a three-dimensional oscillator, got dimension {}",
            spec.dimension()
        )));
    }
    spectral_reality(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_dimensional_examples() {
        assert!(spectral_reality_2d(1.0, 2.0, CouplingValue::real(7f64.sqrt() / 2.0)));
        assert!(spectral_reality_2d(1.0, 3.0, CouplingValue::imaginary(7f64.sqrt())));
        assert!(!spectral_reality_2d(1.0, 1.0, CouplingValue::imaginary(0.1)));
        assert!(spectral_reality_2d(1.0, 2.0, CouplingValue::real(2.0)));
        assert!(!spectral_reality_2d(1.0, 2.0, CouplingValue::real(-2.01)));
        // Strict at the exceptional point.
        assert!(!spectral_reality_2d(1.0, 3.0, CouplingValue::imaginary(4.0)));
    }

    #[test]
    fn case_i_examples() {
        let l = (14.0f64 / 25.0 / 2.0).sqrt();
        let s = OscillatorSpec::quadratic_case_i(2f64.sqrt(), 1.0, CouplingValue::real(l), CouplingValue::real(l)).unwrap();
        let v = spectral_reality_3d(&s).unwrap();
        assert!(v.real);
        assert!(v.violated().is_none());

        let (om, om3) = (2.0f64, 1.0f64);
        let edge = 0.25 * (om * om - om3 * om3).powi(2);
        let g = ((edge + 1e-6) / 2.0).sqrt();
        let s = OscillatorSpec::quadratic_case_i(om, om3, CouplingValue::imaginary(g), CouplingValue::imaginary(g)).unwrap();
        let v = spectral_reality_3d(&s).unwrap();
        assert!(!v.real);
        assert_eq!(v.violated(), Some("−¼(ω² − ω₃²)² ≤ λ₂² + λ₃²"));
    }

    #[test]
    fn case_ii_examples() {
        let (om, om3, l1) = (2.0f64, 1.0f64, 0.5f64);
        let gamma = ((om * om - om3 * om3 + l1).powi(2) / 8.0).sqrt();
        let s = OscillatorSpec::quadratic_case_ii(om, om3, l1, CouplingValue::imaginary(gamma)).unwrap();
        assert!(spectral_reality_3d(&s).unwrap().real);
        let s = OscillatorSpec::quadratic_case_ii(om, om3, l1, CouplingValue::imaginary(gamma * 1.001)).unwrap();
        assert!(!spectral_reality_3d(&s).unwrap().real);
        let s = OscillatorSpec::quadratic_case_ii(om, om3, 5.0, CouplingValue::real(0.1)).unwrap();
        assert_eq!(spectral_reality_3d(&s).unwrap().violated(), Some("λ₁ ≤ ω²"));
        let s = OscillatorSpec::quadratic_2d(1.0, 2.0, CouplingValue::zero()).unwrap();
        assert!(spectral_reality_3d(&s).is_err());
    }
}
