//! Dense complex polynomials and the Hermite families built on them.
//!
//! Classical Hermite polynomials are generated from the three-term
//! recurrence in exact `i128` arithmetic and rounded once into `f64`.
//! Pseudo-Hermite polynomials `𝓗_m(x) = (-i)^m H_m(ix)` and the
//! exceptional family `Ĥ_{m,n+1} = 𝓗_m H_{n+1} + H_n 𝓗_m'` are derived
//! from them. Real-root counting uses a floating Sturm sequence.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Highest degree for which Hermite coefficients are built.
pub const MAX_DEGREE: usize = 30;

/// Coefficients below this (relative to the largest) are treated as zero in Sturm chains.
pub const STURM_TOLERANCE: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Univariate polynomial with complex coefficients in ascending degree order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&ZERO) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(ZERO);
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    pub fn zero() -> Self {
        Self::constant(ZERO)
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::from_real(&[0.0, 1.0])
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == ZERO
    }

    pub fn leading(&self) -> Complex64 {
        *self.coeffs.last().expect("never empty")
    }

    /// Horner evaluation.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero();
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// `p(scale * x + shift)` expanded in powers of `x`.
    pub fn compose_affine(&self, scale: Complex64, shift: Complex64) -> Self {
        let inner = Self::new(vec![shift, scale]);
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, &c| &(&acc * &inner) + &Self::constant(c))
    }

    /// Real parts of the coefficients, if every imaginary part is within `tol`
    /// of zero (relative to the largest coefficient).
    pub fn real_coefficients(&self, tol: f64) -> Option<Vec<f64>> {
        let scale = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max).max(1.0);
        self.coeffs
            .iter()
            .map(|c| (c.im.abs() <= tol * scale).then_some(c.re))
            .collect()
    }

    /// Number of distinct real roots in `(lo, hi]`.
    pub fn count_real_roots(&self, lo: f64, hi: f64) -> Result<usize> {
        if !(lo < hi) {
            return Err(Error::Domain(format!("empty interval ({lo}, {hi}]")));
        }
        let real = self.real_coefficients(STURM_TOLERANCE).ok_or_else(|| {
            Error::Domain("Sturm counting needs real coefficients".into())
        })?;
        let chain = SturmChain::new(&real);
        Ok(chain.count(lo, hi))
    }

    /// Distinct real roots in `(lo, hi]`, each located to within `tol`.
    pub fn real_roots(&self, lo: f64, hi: f64, tol: f64) -> Result<Vec<f64>> {
        if !(lo < hi) {
            return Err(Error::Domain(format!("empty interval ({lo}, {hi}]")));
        }
        let real = self.real_coefficients(STURM_TOLERANCE).ok_or_else(|| {
            Error::Domain("root isolation needs real coefficients".into())
        })?;
        let chain = SturmChain::new(&real);
        let mut roots = Vec::new();
        isolate(&chain, lo, hi, tol, &mut roots, 0);
        roots.sort_by(f64::total_cmp);
        Ok(roots)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if *c == ZERO && !(first && k == 0) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c.im == 0.0 {
                write!(f, "{}", c.re)?;
            } else {
                write!(f, "({}{:+}i)", c.re, c.im)?;
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get = |p: &Polynomial, k: usize| p.coeffs.get(k).copied().unwrap_or(ZERO);
        Polynomial::new((0..n).map(|k| get(self, k) + get(rhs, k)).collect())
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        let mut out = vec![ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

fn hermite_integer(n: usize) -> Result<Vec<i128>> {
    if n > MAX_DEGREE {
        return Err(Error::DegreeTooLarge(n));
    }
    let overflow = || Error::DegreeTooLarge(n);
    let mut prev: Vec<i128> = vec![1];
    if n == 0 {
        return Ok(prev);
    }
    let mut cur: Vec<i128> = vec![0, 2];
    for k in 1..n {
        // H_{k+1} = 2x H_k - 2k H_{k-1}
        let mut next = vec![0i128; k + 2];
        for (j, &c) in cur.iter().enumerate() {
            next[j + 1] = c.checked_mul(2).ok_or_else(overflow)?;
        }
        let factor = 2 * k as i128;
        for (j, &c) in prev.iter().enumerate() {
            let t = c.checked_mul(factor).ok_or_else(overflow)?;
            next[j] = next[j].checked_sub(t).ok_or_else(overflow)?;
        }
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

/// Physicists' Hermite polynomial `H_n`.
pub fn hermite(n: usize) -> Result<Polynomial> {
    Ok(Polynomial::new(
        hermite_integer(n)?
            .into_iter()
            .map(|c| Complex64::new(c as f64, 0.0))
            .collect(),
    ))
}

/// Pseudo-Hermite polynomial `𝓗_m(x) = (-i)^m H_m(ix)`.
pub fn pseudo_hermite(m: usize) -> Result<Polynomial> {
    let h = hermite_integer(m)?;
    let phase = (0..m).fold(Complex64::new(1.0, 0.0), |acc, _| acc * (-I));
    let mut ik = Complex64::new(1.0, 0.0);
    let mut coeffs = Vec::with_capacity(h.len());
    for &c in &h {
        coeffs.push(phase * ik * c as f64);
        ik *= I;
    }
    Ok(Polynomial::new(coeffs))
}

/// Exceptional Hermite polynomial `Ĥ_{m,index}`: 1 for `index == 0`,
/// otherwise `𝓗_m H_index + H_{index-1} 𝓗_m'`.
pub fn exceptional_hermite(m: usize, index: usize) -> Result<Polynomial> {
    if index == 0 {
        return Ok(Polynomial::one());
    }
    let pm = pseudo_hermite(m)?;
    let a = &pm * &hermite(index)?;
    let b = &hermite(index - 1)? * &pm.derivative();
    Ok(&a + &b)
}

/// Sturm chain of a real polynomial, built with normalized floating remainders.
#[derive(Debug, Clone)]
pub struct SturmChain {
    chain: Vec<Vec<f64>>,
}

fn trim(mut p: Vec<f64>) -> Vec<f64> {
    let scale = p.iter().map(|c| c.abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        return vec![];
    }
    for c in p.iter_mut() {
        *c /= scale;
        if c.abs() < STURM_TOLERANCE {
            *c = 0.0;
        }
    }
    while p.last() == Some(&0.0) {
        p.pop();
    }
    p
}

fn remainder(num: &[f64], den: &[f64]) -> Vec<f64> {
    let mut r = num.to_vec();
    let dl = *den.last().expect("non-empty divisor");
    while r.len() >= den.len() {
        let q = r.last().copied().unwrap_or(0.0) / dl;
        let shift = r.len() - den.len();
        for (j, &d) in den.iter().enumerate() {
            r[shift + j] -= q * d;
        }
        r.pop();
    }
    r
}

fn eval_real(p: &[f64], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

impl SturmChain {
    pub fn new(coeffs: &[f64]) -> Self {
        let p0 = trim(coeffs.to_vec());
        if p0.len() <= 1 {
            return Self { chain: vec![p0] };
        }
        let dp: Vec<f64> = p0.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect();
        let mut chain = vec![p0, trim(dp)];
        loop {
            let n = chain.len();
            if chain[n - 1].len() <= 1 {
                break;
            }
            let r = trim(remainder(&chain[n - 2], &chain[n - 1]));
            if r.is_empty() {
                break;
            }
            chain.push(r.into_iter().map(|c| -c).collect());
        }
        Self { chain }
    }

    fn variations(&self, x: f64) -> usize {
        let mut count = 0;
        let mut last = 0.0f64;
        for p in &self.chain {
            let v = eval_real(p, x);
            if v == 0.0 {
                continue;
            }
            if last != 0.0 && (v > 0.0) != (last > 0.0) {
                count += 1;
            }
            last = v;
        }
        count
    }

    /// Distinct real roots in `(lo, hi]`.
    pub fn count(&self, lo: f64, hi: f64) -> usize {
        if self.chain[0].len() <= 1 {
            return 0;
        }
        self.variations(lo).saturating_sub(self.variations(hi))
    }
}

fn isolate(chain: &SturmChain, lo: f64, hi: f64, tol: f64, out: &mut Vec<f64>, depth: usize) {
    let n = chain.count(lo, hi);
    if n == 0 {
        return;
    }
    if (n == 1 && hi - lo <= tol) || depth > 200 {
        out.push(0.5 * (lo + hi));
        return;
    }
    let mid = 0.5 * (lo + hi);
    isolate(chain, lo, mid, tol, out, depth + 1);
    isolate(chain, mid, hi, tol, out, depth + 1);
}
