use super::maps::check_frequency;
use super::{CouplingValue, Flavor};
use crate::error::{Error, Result};

/// Parameters of the three-dimensional degeneracy conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DegeneracyCase {
    /// Cross couplings `λ₂, λ₃`; the result is `√(λ₂² + λ₃²)`.
    CaseI { omega: f64, omega3: f64 },
    /// Equal cross couplings `λ` with in-plane coupling `λ₁`; the result is `λ`.
    CaseII { omega: f64, omega3: f64, lambda1: f64 },
}

fn check_ratio(r: f64) -> Result<()> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::Domain(format!("frequency ratio must be positive, got {r}")));
    }
    Ok(())
}

fn from_square(square: f64) -> CouplingValue {
    if square >= 0.0 {
        CouplingValue::real(square.sqrt())
    } else {
        CouplingValue::imaginary((-square).sqrt())
    }
}

/// `λ²` that makes the planar tilde-frequency ratio equal `r̃`, given `p = ω₁²` and `q = ω₂²`
/// in the potential `¼(p u² + q v²) + (λ/2) u v`.
fn planar_coupling_square(r_tilde: f64, p: f64, q: f64) -> f64 {
    let (w1, w2) = (p.sqrt(), q.sqrt());
    let r = w1 / w2;
    let rt2 = r_tilde * r_tilde;
    let bracket = (rt2 * rt2 + 1.0) - (r_tilde / r).powi(2) * (r.powi(4) + 1.0);
    p * q * bracket / ((rt2 + 1.0) * (rt2 + 1.0))
}

/// Coupling for which the 2D tilde frequencies stand in the ratio `r̃`.
///
/// A negative radicand yields an imaginary coupling.
pub fn degeneracy_coupling_2d(r_tilde: f64, omega1: f64, omega2: f64) -> Result<CouplingValue> {
    check_ratio(r_tilde)?;
    check_frequency("ω₁", omega1)?;
    check_frequency("ω₂", omega2)?;
    Ok(from_square(planar_coupling_square(
        r_tilde,
        omega1 * omega1,
        omega2 * omega2,
    )))
}

/// Coupling for which the rotated pair of 3D tilde frequencies stands in the ratio `ũ`.
///
/// With `flavor` given, a result of the other flavor is a flavor-mismatch error.
pub fn degeneracy_coupling_3d(
    case: DegeneracyCase,
    u_tilde: f64,
    flavor: Option<Flavor>,
) -> Result<CouplingValue> {
    check_ratio(u_tilde)?;
    let square = match case {
        DegeneracyCase::CaseI { omega, omega3 } => {
            check_frequency("ω", omega)?;
            check_frequency("ω₃", omega3)?;
            planar_coupling_square(u_tilde, omega * omega, omega3 * omega3)
        }
        DegeneracyCase::CaseII {
            omega,
            omega3,
            lambda1,
        } => {
            check_frequency("ω", omega)?;
            check_frequency("ω₃", omega3)?;
            if !lambda1.is_finite() {
                return Err(Error::Domain("λ₁ must be finite".into()));
            }
            let u2 = u_tilde * u_tilde;
            let root = (1.0 - u2).abs() / (1.0 + u2) * (omega * omega + omega3 * omega3 + lambda1);
            let gap = omega * omega - omega3 * omega3 + lambda1;
            (root * root - gap * gap) / 8.0
        }
    };
    let value = from_square(square);
    if let Some(want) = flavor {
        if value.flavor != want && !value.is_zero() {
            return Err(Error::FlavorMismatch(format!(
                "ratio {u_tilde} needs a coupling square of {square}, which has no {} root",
                match want {
                    Flavor::Real => "real",
                    Flavor::Imaginary => "imaginary",
                }
            )));
        }
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::{rotate_map_2d, tilde_frequencies_q1, tilde_frequencies_q2};

    #[test]
    fn two_dimensional_examples() {
        let l = degeneracy_coupling_2d(1.0 / 3.0, 1.0, 2.0).unwrap();
        assert_eq!(l.flavor, Flavor::Real);
        assert!((l.value - 7f64.sqrt() / 2.0).abs() < 1e-12);
        let g = degeneracy_coupling_2d(0.5, 1.0, 3.0).unwrap();
        assert_eq!(g.flavor, Flavor::Imaginary);
        assert!((g.value - 7f64.sqrt()).abs() < 1e-12);
        let z = degeneracy_coupling_2d(0.5, 1.0, 2.0).unwrap();
        assert!(z.value.abs() < 1e-7);
        assert!(degeneracy_coupling_2d(0.0, 1.0, 2.0).is_err());
    }

    #[test]
    fn feeding_back_reproduces_ratio() {
        for &(r, w1, w2) in &[(1.0 / 3.0, 1.0, 2.0), (0.5, 1.0, 3.0), (0.25, 2.0, 1.3), (3.0, 1.0, 2.0)] {
            let l = degeneracy_coupling_2d(r, w1, w2).unwrap();
            let s = rotate_map_2d(w1, w2, l).unwrap();
            let ratio = (s.tilde_frequencies[0] / s.tilde_frequencies[1]).re;
            assert!((ratio - f64::min(r, 1.0 / r)).abs() < 1e-10, "{r}: {ratio}");
        }
    }

    #[test]
    fn three_dimensional_examples() {
        let case = DegeneracyCase::CaseI { omega: 2f64.sqrt(), omega3: 1.0 };
        let s = degeneracy_coupling_3d(case, 2.0, Some(Flavor::Real)).unwrap();
        assert!((s.value * s.value - 14.0 / 25.0).abs() < 1e-12);
        let l = CouplingValue::real(s.value / 2f64.sqrt());
        let w = tilde_frequencies_q1(2f64.sqrt(), 1.0, l, l).unwrap();
        assert!(((w[2] / w[1]).re - 2.0).abs() < 1e-12);

        let om = 1.3f64;
        let case = DegeneracyCase::CaseII { omega: om, omega3: om, lambda1: om * om / 2.0 };
        let l = degeneracy_coupling_3d(case, 1.0 / 3.0, None).unwrap();
        assert!((l.value - om * om / 4.0 * 7.5f64.sqrt()).abs() < 1e-12);
        let w = tilde_frequencies_q2(om, om, CouplingValue::real(om * om / 2.0), l).unwrap();
        assert!(((w[1] / w[2]).re - 1.0 / 3.0).abs() < 1e-12);

        // Ratios reachable only with imaginary couplings.
        let case = DegeneracyCase::CaseI { omega: 1.0, omega3: 3.0 };
        assert!(matches!(
            degeneracy_coupling_3d(case, 0.5, Some(Flavor::Real)),
            Err(Error::FlavorMismatch(_))
        ));
        assert_eq!(degeneracy_coupling_3d(case, 0.5, Some(Flavor::Imaginary)).unwrap().flavor, Flavor::Imaginary);
    }

    #[test]
    fn unperturbed_ratio_needs_no_coupling() {
        let case = DegeneracyCase::CaseI { omega: 1.5, omega3: 1.0 };
        assert!(degeneracy_coupling_3d(case, 1.0 / 1.5, None).unwrap().value.abs() < 1e-7);
        let case = DegeneracyCase::CaseII { omega: 1.0, omega3: 2.0, lambda1: 0.3 };
        assert!(degeneracy_coupling_3d(case, 1.3f64.sqrt() / 2.0, None).unwrap().value.abs() < 1e-7);
    }
}
