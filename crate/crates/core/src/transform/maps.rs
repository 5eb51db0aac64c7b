use num_complex::Complex64;

use super::{CoordinateMap, CouplingValue, DecoupledSystem, Flavor, MapParameters};
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Relative size below which `4λ² + Δ²` counts as zero.
const DISCRIMINANT_TOLERANCE: f64 = 1e-14;

pub(crate) fn check_frequency(name: &str, w: f64) -> Result<()> {
    if !(w.is_finite() && w > 0.0) {
        return Err(Error::Domain(format!("{name} must be positive and finite, got {w}")));
    }
    Ok(())
}

/// Rotation in a plane with potential `¼(p·u² + q·v²) + (λ/2)·u·v`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PlaneRotation {
    pub k: Complex64,
    pub a: Complex64,
    pub b: Complex64,
    /// Squared tilde frequencies, lower branch first.
    pub tilde_sq: [Complex64; 2],
}

fn plane_tilde_sq(p: Complex64, q: Complex64, coupling: Complex64) -> ([Complex64; 2], Complex64) {
    let delta = p - q;
    let root = (4.0 * coupling * coupling + delta * delta).sqrt();
    let sum = p + q;
    ([(sum - root) / 2.0, (sum + root) / 2.0], root)
}

pub(crate) fn plane_rotation(p: Complex64, q: Complex64, coupling: Complex64) -> Result<PlaneRotation> {
    let delta = p - q;
    let disc = 4.0 * coupling * coupling + delta * delta;
    let scale = (4.0 * coupling * coupling).norm() + (delta * delta).norm();
    if disc.norm() <= DISCRIMINANT_TOLERANCE * scale || scale == 0.0 {
        return Err(Error::DegenerateTransform(
            "4λ² + (ω₁² − ω₂²)² vanishes; the rotation is undefined".into(),
        ));
    }
    let (tilde_sq, root) = plane_tilde_sq(p, q, coupling);
    let k = delta / root;
    let a = ((ONE - k) / 2.0).sqrt();
    let mut b = ((ONE + k) / 2.0).sqrt();
    // Principal roots fix a·b only up to sign; the cross term cancels for a·b = λ/D.
    let target = coupling / root;
    if (a * b - target).norm() > (a * b + target).norm() {
        b = -b;
    }
    Ok(PlaneRotation { k, a, b, tilde_sq })
}

fn map(dimension: usize, linear: Vec<Complex64>, shift: Vec<Complex64>) -> CoordinateMap {
    CoordinateMap::new(dimension, linear, shift).expect("map shapes are fixed by construction")
}

/// Shift `x̃ = x + 2λ₀/ω²` removing a linear perturbation.
pub fn shift_map_1d(omega: f64, lambda0: CouplingValue) -> Result<DecoupledSystem> {
    check_frequency("ω₁", omega)?;
    let l0 = lambda0.as_complex();
    let w2 = omega * omega;
    Ok(DecoupledSystem {
        tilde_frequencies: vec![Complex64::new(omega, 0.0)],
        potential_constant: -(l0 * l0) / w2,
        map: map(1, vec![ONE], vec![2.0 * l0 / w2]),
        parameters: MapParameters::default(),
    })
}

/// Squared-root tilde frequencies of the 2D quadratic coupling; valid at exceptional points too.
pub fn tilde_frequencies_2d(omega1: f64, omega2: f64, lambda: CouplingValue) -> Result<[Complex64; 2]> {
    check_frequency("ω₁", omega1)?;
    check_frequency("ω₂", omega2)?;
    let (sq, _) = plane_tilde_sq(
        Complex64::new(omega1 * omega1, 0.0),
        Complex64::new(omega2 * omega2, 0.0),
        lambda.as_complex(),
    );
    Ok([sq[0].sqrt(), sq[1].sqrt()])
}

/// Rotation `x̃ = ax − by`, `ỹ = bx + ay` decoupling `¼(ω₁²x² + ω₂²y²) + (λ/2)xy`.
pub fn rotate_map_2d(omega1: f64, omega2: f64, lambda: CouplingValue) -> Result<DecoupledSystem> {
    check_frequency("ω₁", omega1)?;
    check_frequency("ω₂", omega2)?;
    let rot = plane_rotation(
        Complex64::new(omega1 * omega1, 0.0),
        Complex64::new(omega2 * omega2, 0.0),
        lambda.as_complex(),
    )?;
    let (a, b) = (rot.a, rot.b);
    Ok(DecoupledSystem {
        tilde_frequencies: vec![rot.tilde_sq[0].sqrt(), rot.tilde_sq[1].sqrt()],
        potential_constant: ZERO,
        map: map(2, vec![a, -b, b, a], vec![ZERO; 2]),
        parameters: MapParameters {
            k: Some(rot.k),
            a: Some(a),
            b: Some(b),
            ..Default::default()
        },
    })
}

/// `¼(ω₁²x² + ω₂²y² + ω₃²z²) + λ₀z + (λ/2)xy`: rotate `(x, y)`, shift `z`.
///
/// With `λ = 0` the `(x, y)` block is left as the identity.
pub fn decouple_3d_lq(
    omega1: f64,
    omega2: f64,
    omega3: f64,
    lambda0: CouplingValue,
    lambda: CouplingValue,
) -> Result<DecoupledSystem> {
    check_frequency("ω₁", omega1)?;
    check_frequency("ω₂", omega2)?;
    let z = shift_map_1d(omega3, lambda0)?;
    let (a, b, k, w1, w2) = if lambda.is_zero() {
        (ONE, ZERO, None, Complex64::new(omega1, 0.0), Complex64::new(omega2, 0.0))
    } else {
        let planar = rotate_map_2d(omega1, omega2, lambda)?;
        let p = planar.parameters;
        (
            p.a.unwrap(),
            p.b.unwrap(),
            p.k,
            planar.tilde_frequencies[0],
            planar.tilde_frequencies[1],
        )
    };
    Ok(DecoupledSystem {
        tilde_frequencies: vec![w1, w2, z.tilde_frequencies[0]],
        potential_constant: z.potential_constant,
        map: map(
            3,
            vec![a, -b, ZERO, b, a, ZERO, ZERO, ZERO, ONE],
            vec![ZERO, ZERO, z.map.shift()[0]],
        ),
        parameters: MapParameters {
            k,
            a: Some(a),
            b: Some(b),
            ..Default::default()
        },
    })
}

fn q1_direction(lambda2: CouplingValue, lambda3: CouplingValue) -> Result<(Complex64, Complex64, Complex64)> {
    let (l2, l3) = (lambda2.as_complex(), lambda3.as_complex());
    let norm = (l2 * l2 + l3 * l3).sqrt();
    let scale = l2.norm_sqr() + l3.norm_sqr();
    if scale == 0.0 || norm.norm_sqr() <= DISCRIMINANT_TOLERANCE * scale {
        return Err(Error::DegenerateTransform(
            "λ₂² + λ₃² vanishes; the coupling direction (c, d) is undefined".into(),
        ));
    }
    Ok((norm, l2 / norm, l3 / norm))
}

/// Tilde frequencies for `¼(ω²(x²+y²) + ω₃²z² + 2λ₂yz + 2λ₃zx)`; valid at exceptional points.
pub fn tilde_frequencies_q1(
    omega: f64,
    omega3: f64,
    lambda2: CouplingValue,
    lambda3: CouplingValue,
) -> Result<[Complex64; 3]> {
    check_frequency("ω", omega)?;
    check_frequency("ω₃", omega3)?;
    let l2 = lambda2.as_complex();
    let l3 = lambda3.as_complex();
    let coupling = (l2 * l2 + l3 * l3).sqrt();
    let (sq, _) = plane_tilde_sq(
        Complex64::new(omega * omega, 0.0),
        Complex64::new(omega3 * omega3, 0.0),
        coupling,
    );
    Ok([Complex64::new(omega, 0.0), sq[0].sqrt(), sq[1].sqrt()])
}

/// Decoupling of `¼(ω²(x²+y²) + ω₃²z² + 2λ₂yz + 2λ₃zx)`.
///
/// `w = dx + cy` carries all of the coupling to `z`; `x̃ = −cx + dy` is free.
pub fn decouple_3d_q1(
    omega: f64,
    omega3: f64,
    lambda2: CouplingValue,
    lambda3: CouplingValue,
) -> Result<DecoupledSystem> {
    check_frequency("ω", omega)?;
    check_frequency("ω₃", omega3)?;
    let (norm, c, d) = q1_direction(lambda2, lambda3)?;
    let rot = plane_rotation(
        Complex64::new(omega * omega, 0.0),
        Complex64::new(omega3 * omega3, 0.0),
        norm,
    )?;
    let (a, b) = (rot.a, rot.b);
    Ok(DecoupledSystem {
        tilde_frequencies: vec![
            Complex64::new(omega, 0.0),
            rot.tilde_sq[0].sqrt(),
            rot.tilde_sq[1].sqrt(),
        ],
        potential_constant: ZERO,
        map: map(
            3,
            vec![-c, d, ZERO, a * d, a * c, -b, b * d, b * c, a],
            vec![ZERO; 3],
        ),
        parameters: MapParameters {
            k: Some(rot.k),
            a: Some(a),
            b: Some(b),
            c: Some(c),
            d: Some(d),
        },
    })
}

fn q2_real_lambda1(lambda1: CouplingValue) -> Result<f64> {
    if lambda1.flavor == Flavor::Imaginary && lambda1.value != 0.0 {
        return Err(Error::Domain(
            "λ₁ must be real in the equal-cross-coupling case".into(),
        ));
    }
    Ok(lambda1.value)
}

/// Tilde frequencies for `¼(ω²(x²+y²) + ω₃²z² + 2λ₁xy + 2λ(yz+zx))`; valid at exceptional points.
pub fn tilde_frequencies_q2(
    omega: f64,
    omega3: f64,
    lambda1: CouplingValue,
    lambda: CouplingValue,
) -> Result<[Complex64; 3]> {
    check_frequency("ω", omega)?;
    check_frequency("ω₃", omega3)?;
    let l1 = q2_real_lambda1(lambda1)?;
    let (sq, _) = plane_tilde_sq(
        Complex64::new(omega * omega + l1, 0.0),
        Complex64::new(omega3 * omega3, 0.0),
        std::f64::consts::SQRT_2 * lambda.as_complex(),
    );
    Ok([
        Complex64::new(omega * omega - l1, 0.0).sqrt(),
        sq[0].sqrt(),
        sq[1].sqrt(),
    ])
}

/// Decoupling of `¼(ω²(x²+y²) + ω₃²z² + 2λ₁xy + 2λ(yz+zx))`.
///
/// `ω² − λ₁ < 0` is not an error: the first tilde frequency comes out imaginary.
pub fn decouple_3d_q2(
    omega: f64,
    omega3: f64,
    lambda1: CouplingValue,
    lambda: CouplingValue,
) -> Result<DecoupledSystem> {
    check_frequency("ω", omega)?;
    check_frequency("ω₃", omega3)?;
    let l1 = q2_real_lambda1(lambda1)?;
    let p = Complex64::new(omega * omega + l1, 0.0);
    let q = Complex64::new(omega3 * omega3, 0.0);
    let (k, a, b, sq) = if lambda.is_zero() && p == q {
        (None, ONE, ZERO, [p, q])
    } else {
        let rot = plane_rotation(p, q, std::f64::consts::SQRT_2 * lambda.as_complex())?;
        (Some(rot.k), rot.a, rot.b, rot.tilde_sq)
    };
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    Ok(DecoupledSystem {
        tilde_frequencies: vec![
            Complex64::new(omega * omega - l1, 0.0).sqrt(),
            sq[0].sqrt(),
            sq[1].sqrt(),
        ],
        potential_constant: ZERO,
        map: map(
            3,
            vec![-h, h, ZERO, a * h, a * h, -b, b * h, b * h, a],
            vec![ZERO; 3],
        ),
        parameters: MapParameters {
            k,
            a: Some(a),
            b: Some(b),
            ..Default::default()
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn shift_examples() {
        let s = shift_map_1d(2.0, CouplingValue::real(1.0)).unwrap();
        assert_eq!(s.map.shift()[0], c(0.5, 0.0));
        assert_eq!(s.potential_constant, c(-0.25, 0.0));
        let s = shift_map_1d(2.0, CouplingValue::zero()).unwrap();
        assert_eq!(s.map, CoordinateMap::identity(1));
        assert_eq!(s.potential_constant, ZERO);
        let s = shift_map_1d(2.0, CouplingValue::imaginary(1.0)).unwrap();
        assert_eq!(s.map.shift()[0], c(0.0, 0.5));
        assert_eq!(s.potential_constant, c(0.25, 0.0));
        assert!(shift_map_1d(0.0, CouplingValue::zero()).is_err());
        assert!(shift_map_1d(-1.0, CouplingValue::zero()).is_err());
    }

    #[test]
    fn rational_frequency_example() {
        let s = rotate_map_2d(1.0, 2.0, CouplingValue::real(7f64.sqrt() / 2.0)).unwrap();
        let p = s.parameters;
        assert!(close(p.k.unwrap(), c(-0.75, 0.0), 1e-12));
        assert!(close(p.a.unwrap(), c((7.0f64 / 8.0).sqrt(), 0.0), 1e-12));
        assert!(close(p.b.unwrap(), c((1.0f64 / 8.0).sqrt(), 0.0), 1e-12));
        let w = &s.tilde_frequencies;
        assert!(close(w[0] * w[0], c(0.5, 0.0), 1e-12));
        assert!(close(w[1] * w[1], c(4.5, 0.0), 1e-12));
        assert!(close(w[1] / w[0], c(3.0, 0.0), 1e-12));
        assert!(s.map.orthogonality_defect() < 1e-12);
    }

    #[test]
    fn imaginary_degenerate_example() {
        let s = rotate_map_2d(1.0, 3.0, CouplingValue::imaginary(7f64.sqrt())).unwrap();
        let p = s.parameters;
        assert!(close(p.k.unwrap(), c(-4.0 / 3.0, 0.0), 1e-12));
        let ab = p.a.unwrap() * p.b.unwrap();
        assert!(close(ab, c(0.0, 7f64.sqrt() / 6.0), 1e-12));
        let w = &s.tilde_frequencies;
        assert!(close(w[0] * w[0], c(2.0, 0.0), 1e-12));
        assert!(close(w[1] * w[1], c(8.0, 0.0), 1e-12));
        assert!(s.map.orthogonality_defect() < 1e-12);
    }

    #[test]
    fn zero_coupling_swaps_axes_when_first_is_stiffer() {
        let s = rotate_map_2d(3.0, 1.0, CouplingValue::zero()).unwrap();
        let p = s.parameters;
        assert!(close(p.k.unwrap(), ONE, 1e-15));
        assert!(close(p.a.unwrap(), ZERO, 1e-15));
        assert!(close(p.b.unwrap(), ONE, 1e-15));
        assert!(close(s.tilde_frequencies[0], c(1.0, 0.0), 1e-15));
        assert!(close(s.tilde_frequencies[1], c(3.0, 0.0), 1e-15));
    }

    #[test]
    fn negative_coupling_gets_consistent_sign() {
        let s = rotate_map_2d(1.0, 2.0, CouplingValue::real(-1.0)).unwrap();
        let p = s.parameters;
        let d = (4.0f64 + 9.0).sqrt();
        assert!(close(p.a.unwrap() * p.b.unwrap(), c(-1.0 / d, 0.0), 1e-14));
    }

    #[test]
    fn zero_discriminant_is_rejected() {
        let err = rotate_map_2d(1.0, 1.0, CouplingValue::zero()).unwrap_err();
        assert!(matches!(err, Error::DegenerateTransform(_)));
        // |γ| = ½|ω₁² − ω₂²| is an exceptional point.
        let err = rotate_map_2d(1.0, 3.0, CouplingValue::imaginary(4.0)).unwrap_err();
        assert!(matches!(err, Error::DegenerateTransform(_)));
        let w = tilde_frequencies_2d(1.0, 3.0, CouplingValue::imaginary(4.0)).unwrap();
        assert!(close(w[0], w[1], 1e-12));
        assert!(close(w[0] * w[0], c(5.0, 0.0), 1e-12));
    }

    #[test]
    fn lq_limits() {
        let s = decouple_3d_lq(1.0, 2.0, 5.0, CouplingValue::zero(), CouplingValue::zero()).unwrap();
        assert_eq!(s.map, CoordinateMap::identity(3));
        assert_eq!(
            s.tilde_frequencies,
            vec![c(1.0, 0.0), c(2.0, 0.0), c(5.0, 0.0)]
        );
        let s = decouple_3d_lq(
            1.0,
            2.0,
            5.0,
            CouplingValue::real(1.0),
            CouplingValue::real(7f64.sqrt() / 2.0),
        )
        .unwrap();
        assert!(close(s.map.shift()[2], c(2.0 / 25.0, 0.0), 1e-15));
        assert!(close(s.parameters.k.unwrap(), c(-0.75, 0.0), 1e-12));
        assert!(close(s.tilde_frequencies[1] / s.tilde_frequencies[0], c(3.0, 0.0), 1e-12));
        let s = decouple_3d_lq(
            1.0,
            2.0,
            5.0,
            CouplingValue::imaginary(1.0),
            CouplingValue::real(0.3),
        )
        .unwrap();
        assert!(close(s.map.shift()[2], c(0.0, 2.0 / 25.0), 1e-15));
        assert!(close(s.potential_constant, c(1.0 / 25.0, 0.0), 1e-15));
    }

    #[test]
    fn q1_example_and_limits() {
        let l = 7f64.sqrt() / 5.0;
        let s = decouple_3d_q1(2f64.sqrt(), 1.0, CouplingValue::real(l), CouplingValue::real(l)).unwrap();
        let w = &s.tilde_frequencies;
        assert!(close(w[2] / w[1], c(2.0, 0.0), 1e-12));
        assert!(close(w[1] * w[1], c(0.6, 0.0), 1e-12));
        assert!(s.map.orthogonality_defect() < 1e-12);
        let p = s.parameters;
        let (cc, dd) = (p.c.unwrap(), p.d.unwrap());
        assert!(close(cc * cc + dd * dd, ONE, 1e-15));

        let err = decouple_3d_q1(1.0, 2.0, CouplingValue::zero(), CouplingValue::zero()).unwrap_err();
        assert!(matches!(err, Error::DegenerateTransform(_)));

        // Tiny couplings along c = d leave ordered unperturbed frequencies.
        let eps = CouplingValue::real(1e-9);
        let s = decouple_3d_q1(3.0, 1.5, eps, eps).unwrap();
        assert_abs_diff_eq!(s.tilde_frequencies[1].re, 1.5, epsilon = 1e-9);
        assert_abs_diff_eq!(s.tilde_frequencies[2].re, 3.0, epsilon = 1e-9);
    }

    #[test]
    fn q2_examples() {
        let s = decouple_3d_q2(2.0, 1.0, CouplingValue::zero(), CouplingValue::zero()).unwrap();
        let w = &s.tilde_frequencies;
        assert!(close(w[0], c(2.0, 0.0), 1e-15));
        assert!(close(w[1], c(1.0, 0.0), 1e-15));
        assert!(close(w[2], c(2.0, 0.0), 1e-15));

        let om = 1.7f64;
        let lam = om * om / 4.0 * (7.5f64).sqrt();
        let s = decouple_3d_q2(om, om, CouplingValue::real(om * om / 2.0), CouplingValue::real(lam)).unwrap();
        let w = &s.tilde_frequencies;
        assert!(close(w[1] / w[2], c(1.0 / 3.0, 0.0), 1e-12));
        assert!(s.map.orthogonality_defect() < 1e-12);

        let err = decouple_3d_q2(1.0, 1.0, CouplingValue::imaginary(0.2), CouplingValue::real(0.1)).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));

        // Exceptional point: the decoupling fails but the frequencies coalesce.
        let (om, om3, l1) = (2.0f64, 1.0f64, 0.5f64);
        let gamma = (om * om - om3 * om3 + l1) / 8f64.sqrt();
        let lam = CouplingValue::imaginary(gamma);
        assert!(decouple_3d_q2(om, om3, CouplingValue::real(l1), lam).is_err());
        let w = tilde_frequencies_q2(om, om3, CouplingValue::real(l1), lam).unwrap();
        assert!(close(w[1], w[2], 1e-7));

        // λ₁ > ω² leaves the first frequency imaginary without failing.
        let s = decouple_3d_q2(1.0, 2.0, CouplingValue::real(1.5), CouplingValue::real(0.1)).unwrap();
        assert!(s.tilde_frequencies[0].im > 0.0);
    }
}
