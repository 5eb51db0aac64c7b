//! Numerical kernels shared by the verification routines: uniform grids,
//! an 8th-order central second-derivative stencil, composite Simpson
//! quadrature and an implicit-shift QL eigenvalue solver for symmetric
//! tridiagonal matrices.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Half-width of the stencil used by [`second_derivative`].
pub const STENCIL_RADIUS: usize = 4;

/// Central-difference weights for f'' at 8th order, offsets -4..=4 (times 1/h²).
pub const STENCIL_WEIGHTS: [f64; 9] = [
    -1.0 / 560.0,
    8.0 / 315.0,
    -1.0 / 5.0,
    8.0 / 5.0,
    -205.0 / 72.0,
    8.0 / 5.0,
    -1.0 / 5.0,
    8.0 / 315.0,
    -1.0 / 560.0,
];

/// Uniform grid on `[center - half_width, center + half_width]`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    center: f64,
    half_width: f64,
    n_points: usize,
}

impl Grid {
    pub fn new(center: f64, half_width: f64, n_points: usize) -> Result<Self> {
        if n_points < 2 * STENCIL_RADIUS + 1 {
            return Err(Error::Domain(format!(
                "grid needs at least {} points, got {n_points}",
                2 * STENCIL_RADIUS + 1
            )));
        }
        if !(half_width.is_finite() && half_width > 0.0) || !center.is_finite() {
            return Err(Error::Domain(format!(
                "grid half-width must be positive and finite, got {half_width}"
            )));
        }
        Ok(Self {
            center,
            half_width,
            n_points,
        })
    }

    /// Grid over `[lo, hi]`.
    pub fn spanning(lo: f64, hi: f64, n_points: usize) -> Result<Self> {
        Self::new(0.5 * (lo + hi), 0.5 * (hi - lo), n_points)
    }

    /// Box wide enough that a Gaussian `exp(-omega x^2 / 4)` is negligible at the edges.
    pub fn for_frequency(center: f64, omega_min: f64, n_points: usize) -> Result<Self> {
        if !(omega_min > 0.0) {
            return Err(Error::Domain(format!(
                "frequency must be positive, got {omega_min}"
            )));
        }
        Self::new(center, 12.0 / omega_min.sqrt(), n_points)
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn lo(&self) -> f64 {
        self.center - self.half_width
    }

    pub fn hi(&self) -> f64 {
        self.center + self.half_width
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.n_points - 1) as f64
    }

    pub fn point(&self, index: usize) -> f64 {
        if index + 1 == self.n_points {
            self.hi()
        } else {
            self.lo() + index as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.point(i))
    }

    pub fn sample<T, F: FnMut(f64) -> T>(&self, f: F) -> Vec<T> {
        self.points().map(f).collect()
    }
}

/// 8th-order central estimate of f'' at `grid.point(index)`.
pub fn second_derivative<T>(samples: &[T], grid: &Grid, index: usize) -> Result<Complex64>
where
    T: Copy + Into<Complex64>,
{
    if samples.len() != grid.len() {
        return Err(Error::Shape {
            expected: grid.len(),
            found: samples.len(),
        });
    }
    if index < STENCIL_RADIUS || index + STENCIL_RADIUS >= samples.len() {
        return Err(Error::Boundary {
            index,
            needed: STENCIL_RADIUS,
            len: samples.len(),
        });
    }
    let h = grid.spacing();
    Ok(stencil_sum(&samples[index - STENCIL_RADIUS..=index + STENCIL_RADIUS]) / (h * h))
}

/// Applies [`STENCIL_WEIGHTS`] to a 9-point window, without the 1/h² factor.
pub(crate) fn stencil_sum<T: Copy + Into<Complex64>>(window: &[T]) -> Complex64 {
    // Centre weight is -2 * sum of the others, so work with differences
    // against the centre; constants then cancel exactly.
    let c = |i: usize| -> Complex64 { window[i].into() };
    let centre = c(4);
    let mut acc = Complex64::new(0.0, 0.0);
    for k in (1..=STENCIL_RADIUS).rev() {
        acc += ((c(4 - k) - centre) + (c(4 + k) - centre)) * STENCIL_WEIGHTS[4 + k];
    }
    acc
}

/// f'' at `x` by evaluating `f` on the 9-point stencil of spacing `h`.
pub fn second_derivative_at<F>(f: F, x: f64, h: f64) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let mut window = [Complex64::new(0.0, 0.0); 9];
    for (k, w) in window.iter_mut().enumerate() {
        *w = f(x + (k as f64 - STENCIL_RADIUS as f64) * h);
    }
    stencil_sum(&window) / (h * h)
}

/// Composite Simpson rule over the grid span. An even point count closes
/// with a Simpson 3/8 panel on the last three intervals.
pub fn integrate<T>(samples: &[T], grid: &Grid) -> Result<Complex64>
where
    T: Copy + Into<Complex64>,
{
    let n = samples.len();
    if n != grid.len() {
        return Err(Error::Shape {
            expected: grid.len(),
            found: n,
        });
    }
    let h = grid.spacing();
    let f = |i: usize| -> Complex64 { samples[i].into() };
    let simpson_end = if n % 2 == 1 { n - 1 } else { n - 4 };
    let mut acc = Complex64::new(0.0, 0.0);
    let mut i = 0;
    while i < simpson_end {
        acc += (f(i) + f(i + 1) * 4.0 + f(i + 2)) * (h / 3.0);
        i += 2;
    }
    if n.is_multiple_of(2) {
        let j = n - 4;
        acc += (f(j) + f(j + 1) * 3.0 + f(j + 2) * 3.0 + f(j + 3)) * (3.0 * h / 8.0);
    }
    Ok(acc)
}

/// Symmetric tridiagonal matrix stored as its diagonal and first off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalMatrix {
    diagonal: Vec<f64>,
    off_diagonal: Vec<f64>,
}

impl TridiagonalMatrix {
    pub fn new(diagonal: Vec<f64>, off_diagonal: Vec<f64>) -> Result<Self> {
        if diagonal.is_empty() {
            return Err(Error::Domain("empty tridiagonal matrix".into()));
        }
        if off_diagonal.len() + 1 != diagonal.len() {
            return Err(Error::Shape {
                expected: diagonal.len() - 1,
                found: off_diagonal.len(),
            });
        }
        Ok(Self {
            diagonal,
            off_diagonal,
        })
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn off_diagonal(&self) -> &[f64] {
        &self.off_diagonal
    }
}

const QL_MAX_SWEEPS: usize = 60;

/// The `k` smallest eigenvalues, ascending, by implicit-shift QL iteration.
pub fn lowest_eigenvalues(matrix: &TridiagonalMatrix, k: usize) -> Result<Vec<f64>> {
    let n = matrix.dim();
    if k == 0 || k > n {
        return Err(Error::Domain(format!(
            "requested {k} eigenvalues of a {n}x{n} matrix"
        )));
    }
    let mut d = matrix.diagonal.clone();
    let mut e = matrix.off_diagonal.clone();
    e.push(0.0);
    implicit_ql(&mut d, &mut e)?;
    d.sort_by(f64::total_cmp);
    d.truncate(k);
    Ok(d)
}

// e[i] couples d[i] and d[i + 1]; e[n - 1] is scratch.
fn implicit_ql(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > QL_MAX_SWEEPS {
                return Err(Error::NoConvergence {
                    what: "tridiagonal QL",
                    iterations: QL_MAX_SWEEPS,
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn stencil_is_exact_on_quadratics() {
        let grid = Grid::new(0.3, 2.0, 41).unwrap();
        let s = grid.sample(|x| x * x);
        for i in 4..37 {
            let d2 = second_derivative(&s, &grid, i).unwrap();
            assert_abs_diff_eq!(d2.re, 2.0, epsilon = 1e-10);
        }
        let c = grid.sample(|_| 7.5);
        assert_eq!(second_derivative(&c, &grid, 10).unwrap().re, 0.0);
    }

    #[test]
    fn stencil_matches_hand_derivative_of_gaussian() {
        // f = exp(-x^2/4)  =>  f'' = (x^2/4 - 1/2) exp(-x^2/4)
        let grid = Grid::new(1.0, 0.01, 21).unwrap();
        assert_abs_diff_eq!(grid.spacing(), 1e-3, epsilon = 1e-15);
        let s = grid.sample(|x| (-x * x / 4.0).exp());
        let d2 = second_derivative(&s, &grid, 10).unwrap();
        let exact = (0.25 - 0.5) * (-0.25f64).exp();
        assert_abs_diff_eq!(d2.re, exact, epsilon = 1e-9);
    }

    #[test]
    fn stencil_rejects_boundary_indices() {
        let grid = Grid::new(0.0, 1.0, 11).unwrap();
        let s = grid.sample(|x| x);
        assert!(matches!(
            second_derivative(&s, &grid, 3),
            Err(Error::Boundary { .. })
        ));
        assert!(matches!(
            second_derivative(&s, &grid, 7),
            Err(Error::Boundary { .. })
        ));
        assert!(second_derivative(&s, &grid, 6).is_ok());
        assert!(matches!(
            second_derivative(&s[..10], &grid, 5),
            Err(Error::Shape { .. })
        ));
    }

    #[test]
    fn grid_rejects_too_few_points() {
        assert!(Grid::new(0.0, 1.0, 8).is_err());
        assert!(Grid::new(0.0, -1.0, 20).is_err());
        let g = Grid::new(0.0, 1.0, 9).unwrap();
        assert!(g.points().zip(g.points().skip(1)).all(|(a, b)| b > a));
        assert_eq!(g.point(8), 1.0);
    }

    #[test]
    fn simpson_gaussian_and_odd_integrands() {
        let grid = Grid::new(0.0, 10.0, 4001).unwrap();
        let g = grid.sample(|x| (-x * x).exp());
        let v = integrate(&g, &grid).unwrap();
        assert_abs_diff_eq!(v.re, std::f64::consts::PI.sqrt(), epsilon = 1e-8);

        let odd = grid.sample(|x| x);
        assert_abs_diff_eq!(integrate(&odd, &grid).unwrap().norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn simpson_even_point_count_is_exact_on_cubics() {
        let grid = Grid::spanning(0.0, 1.0, 10).unwrap();
        let s = grid.sample(|x| x * x * x);
        assert_abs_diff_eq!(integrate(&s, &grid).unwrap().re, 0.25, epsilon = 1e-14);
    }

    #[test]
    fn two_by_two_and_identity_spectra() {
        let m = TridiagonalMatrix::new(vec![2.0, 2.0], vec![-1.0]).unwrap();
        let ev = lowest_eigenvalues(&m, 2).unwrap();
        assert_abs_diff_eq!(ev[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ev[1], 3.0, epsilon = 1e-14);

        let id = TridiagonalMatrix::new(vec![1.0; 5], vec![0.0; 4]).unwrap();
        assert_eq!(lowest_eigenvalues(&id, 3).unwrap(), vec![1.0, 1.0, 1.0]);
        assert!(lowest_eigenvalues(&id, 6).is_err());
        assert!(TridiagonalMatrix::new(vec![1.0; 3], vec![0.0; 3]).is_err());
    }

    #[test]
    fn ql_matches_closed_form_toeplitz_spectrum() {
        // tridiag(-1, 2, -1) of size n: 2 - 2 cos(j pi / (n + 1)).
        let n = 50;
        let m = TridiagonalMatrix::new(vec![2.0; n], vec![-1.0; n - 1]).unwrap();
        let ev = lowest_eigenvalues(&m, n).unwrap();
        for (j, v) in ev.iter().enumerate() {
            let exact =
                2.0 - 2.0 * ((j + 1) as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos();
            assert_abs_diff_eq!(*v, exact, epsilon = 1e-12);
        }
    }
}
