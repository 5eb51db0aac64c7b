use num_complex::Complex64;
use proptest::prelude::*;
use rexosc_core::numerics::{integrate, Grid};
use rexosc_core::poly::{exceptional_hermite, hermite, pseudo_hermite, Polynomial, MAX_DEGREE};

#[test]
fn even_pseudo_hermite_has_no_real_roots() {
    for m in (0..=20).step_by(2) {
        assert_eq!(pseudo_hermite(m).unwrap().count_real_roots(-1e6, 1e6).unwrap(), 0, "m={m}");
    }
}

#[test]
fn odd_pseudo_hermite_vanishes_only_at_the_origin() {
    for m in (1..=19).step_by(2) {
        let p = pseudo_hermite(m).unwrap();
        let roots = p.real_roots(-1e6, 1e6, 1e-12).unwrap();
        assert_eq!(roots.len(), 1, "m={m}");
        assert!(roots[0].abs() < 1e-10);
    }
}

#[test]
fn exceptional_degrees() {
    for m in 0..=12 {
        for n in 0..=12 {
            assert_eq!(exceptional_hermite(m, n + 1).unwrap().degree(), m + n + 1, "m={m} n={n}");
        }
    }
}

#[test]
fn hermite_weighted_orthogonality() {
    let g = Grid::new(0.0, 10.0, 4001).unwrap();
    for j in 0..=8 {
        for k in 0..j {
            let (hj, hk) = (hermite(j).unwrap(), hermite(k).unwrap());
            let s = g.sample(|x| {
                let z = Complex64::new(x, 0.0);
                hj.evaluate(z) * hk.evaluate(z) * (-x * x).exp()
            });
            assert!(integrate(&s, &g).unwrap().norm() < 1e-8, "j={j} k={k}");
        }
    }
}

fn has_parity(p: &Polynomial, n: usize) {
    for (k, c) in p.coefficients().iter().enumerate() {
        if (k + n) % 2 == 1 {
            assert_eq!(*c, Complex64::new(0.0, 0.0), "degree {n}, coefficient {k}");
        }
    }
}

#[test]
fn parity_is_coefficient_exact() {
    for n in 0..=MAX_DEGREE {
        has_parity(&hermite(n).unwrap(), n);
        has_parity(&pseudo_hermite(n).unwrap(), n);
    }
    assert!(hermite(MAX_DEGREE + 1).is_err());
}

#[test]
fn pseudo_hermite_coefficients_are_real_and_positive() {
    for m in 0..=15 {
        let p = pseudo_hermite(m).unwrap();
        for c in p.coefficients() {
            assert_eq!(c.im, 0.0);
            assert!(c.re >= 0.0);
        }
    }
}

proptest! {
    #[test]
    fn pseudo_hermite_is_rotated_hermite(m in 0usize..12, x in -2.0f64..2.0, y in -2.0f64..2.0) {
        let z = Complex64::new(x, y);
        let i = Complex64::new(0.0, 1.0);
        let want = (-i).powu(m as u32) * hermite(m).unwrap().evaluate(i * z);
        let got = pseudo_hermite(m).unwrap().evaluate(z);
        prop_assert!((got - want).norm() <= 1e-10 * (1.0 + want.norm()));
    }

    #[test]
    fn exceptional_hermite_definition(m in 0usize..8, n in 0usize..8, x in -2.0f64..2.0) {
        let z = Complex64::new(x, 0.0);
        let pm = pseudo_hermite(m).unwrap();
        let want = pm.evaluate(z) * hermite(n + 1).unwrap().evaluate(z)
            + hermite(n).unwrap().evaluate(z) * pm.derivative().evaluate(z);
        let got = exceptional_hermite(m, n + 1).unwrap().evaluate(z);
        prop_assert!((got - want).norm() <= 1e-10 * (1.0 + want.norm()));
    }

    #[test]
    fn sturm_counts_match_hermite_roots(n in 1usize..14, lo in -6.0f64..0.0, width in 0.5f64..8.0) {
        let hi = lo + width;
        let roots = hermite(n).unwrap().real_roots(-10.0, 10.0, 1e-12).unwrap();
        prop_assert_eq!(roots.len(), n);
        let inside = roots.iter().filter(|r| **r > lo && **r <= hi).count();
        let closest = roots.iter().map(|r| (r - lo).abs().min((r - hi).abs())).fold(f64::INFINITY, f64::min);
        prop_assume!(closest > 1e-9);
        prop_assert_eq!(hermite(n).unwrap().count_real_roots(lo, hi).unwrap(), inside);
    }
}
