use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sampling::Sampling;
use crate::error::{Error, Result};
use crate::model::{Eigenstate, ExtendedSystem, OscillatorSpec, REConfig, StateFunction};
use crate::numerics::STENCIL_WEIGHTS;

/// Reweighting passes pushing the least-squares offset toward the minimax one.
const MINIMAX_ITERATIONS: usize = 3;

/// `(ψ(p), −∇²ψ(p) + V(p)ψ(p))` with 8th-order stencils along each original axis.
pub(crate) fn hamiltonian_action(
    sys: &ExtendedSystem,
    psi: &StateFunction,
    p: &[f64],
    h: f64,
) -> Result<(Complex64, Complex64)> {
    let mut z: Vec<Complex64> = p.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let centre = psi.evaluate(&z)?;
    let mut lap = Complex64::new(0.0, 0.0);
    for k in 0..p.len() {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 1..=4usize {
            z[k] = Complex64::new(p[k] - j as f64 * h, 0.0);
            let lo = psi.evaluate(&z)?;
            z[k] = Complex64::new(p[k] + j as f64 * h, 0.0);
            let hi = psi.evaluate(&z)?;
            acc += ((lo - centre) + (hi - centre)) * STENCIL_WEIGHTS[4 + j];
        }
        z[k] = Complex64::new(p[k], 0.0);
        lap += acc / (h * h);
    }
    let v = sys.potential(&z)?;
    Ok((centre, -lap + v * centre))
}

/// Samples of `ψ` and `Hψ` on the usable points of the sampling grid.
pub(crate) struct ActionSamples {
    pub indices: Vec<usize>,
    pub psi: Vec<Complex64>,
    pub h_psi: Vec<Complex64>,
}

pub(crate) fn sample_action(
    sys: &ExtendedSystem,
    state: &Eigenstate,
    sampling: &Sampling,
) -> Result<ActionSamples> {
    sampling.check(sys)?;
    let psi = sys.state(state)?;
    let loci = sampling.poles(sys)?;
    let usable = sampling.usable(&loci);
    let rows = (0..sampling.len())
        .into_par_iter()
        .filter(|&i| usable[i])
        .map(|i| {
            let p = sampling.point(i);
            hamiltonian_action(sys, &psi, &p, sampling.stencil_step).map(|(a, b)| (i, a, b))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = ActionSamples {
        indices: Vec::with_capacity(rows.len()),
        psi: Vec::with_capacity(rows.len()),
        h_psi: Vec::with_capacity(rows.len()),
    };
    for (i, a, b) in rows {
        out.indices.push(i);
        out.psi.push(a);
        out.h_psi.push(b);
    }
    Ok(out)
}

/// Outcome of a Schrödinger residual scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualScan {
    /// `max |Hψ − (E_rel + c)ψ|` normalized by `max|ψ| · (|E_rel| + max|ω̃|)`.
    pub max_residual: f64,
    /// Constant `c` shifting the relative energy to the measured eigenvalue.
    pub fitted_offset: Complex64,
    pub relative_energy: Complex64,
    pub points_used: usize,
}

/// Fit `u ≈ c ψ` in the minimax sense by iteratively reweighted least squares.
fn minimax_scalar(u: &[Complex64], psi: &[Complex64]) -> (Complex64, f64) {
    let mut w = vec![1.0; u.len()];
    let fit = |w: &[f64]| -> Complex64 {
        let (mut num, mut den) = (Complex64::new(0.0, 0.0), 0.0);
        for ((&wi, &ui), &pi) in w.iter().zip(u).zip(psi) {
            num += wi * pi.conj() * ui;
            den += wi * pi.norm_sqr();
        }
        if den > 0.0 {
            num / den
        } else {
            Complex64::new(0.0, 0.0)
        }
    };
    let worst = |c: Complex64| -> f64 {
        u.iter()
            .zip(psi)
            .map(|(&ui, &pi)| (ui - c * pi).norm())
            .fold(0.0, f64::max)
    };
    let mut best = fit(&w);
    let mut best_err = worst(best);
    for _ in 0..MINIMAX_ITERATIONS {
        let errs: Vec<f64> = u.iter().zip(psi).map(|(&ui, &pi)| (ui - best * pi).norm()).collect();
        let top = errs.iter().cloned().fold(0.0, f64::max);
        if top == 0.0 {
            break;
        }
        for (wi, e) in w.iter_mut().zip(&errs) {
            *wi *= e / top;
        }
        let total: f64 = w.iter().sum();
        if total == 0.0 {
            break;
        }
        w.iter_mut().for_each(|x| *x /= total);
        let c = fit(&w);
        let e = worst(c);
        if e < best_err {
            best = c;
            best_err = e;
        }
    }
    (best, best_err)
}

pub(crate) fn residual_scan_system(
    sys: &ExtendedSystem,
    state: &Eigenstate,
    sampling: &Sampling,
) -> Result<ResidualScan> {
    let e_rel = sys.relative_energy(state)?;
    let s = sample_action(sys, state, sampling)?;
    if s.psi.is_empty() {
        return Err(Error::Singular("every sample point lies in a pole guard band".into()));
    }
    let u: Vec<Complex64> = s
        .h_psi
        .iter()
        .zip(&s.psi)
        .map(|(&hp, &p)| hp - e_rel * p)
        .collect();
    let (offset, worst) = minimax_scalar(&u, &s.psi);
    let psi_max = s.psi.iter().map(|p| p.norm()).fold(0.0, f64::max);
    if psi_max == 0.0 {
        return Err(Error::Indeterminate("wavefunction vanishes on the grid".into()));
    }
    let scale = psi_max * (e_rel.norm() + sys.decoupled().max_frequency_norm());
    Ok(ResidualScan {
        max_residual: worst / scale,
        fitted_offset: offset,
        relative_energy: e_rel,
        points_used: s.psi.len(),
    })
}

/// Schrödinger residual of the closed-form eigenfunction and the fitted energy offset.
pub fn residual_scan(
    spec: &OscillatorSpec,
    config: &REConfig,
    state: &Eigenstate,
    sampling: &Sampling,
) -> Result<ResidualScan> {
    residual_scan_system(&ExtendedSystem::new(spec, config)?, state, sampling)
}

pub(crate) fn rayleigh_system(sys: &ExtendedSystem, state: &Eigenstate, sampling: &Sampling) -> Result<Complex64> {
    let s = sample_action(sys, state, sampling)?;
    let hermitian = sys.spec().is_hermitian();
    let n = sampling.len();
    let mut num = vec![Complex64::new(0.0, 0.0); n];
    let mut den = vec![Complex64::new(0.0, 0.0); n];
    let mut mass = vec![Complex64::new(0.0, 0.0); n];
    for ((&i, &p), &hp) in s.indices.iter().zip(&s.psi).zip(&s.h_psi) {
        let left = if hermitian { p.conj() } else { p };
        num[i] = left * hp;
        den[i] = left * p;
        mass[i] = Complex64::new(p.norm_sqr(), 0.0);
    }
    let d = sampling.integrate(&den)?;
    let scale = sampling.integrate(&mass)?.re;
    if !(d.norm() > 1e-12 * scale) || scale == 0.0 {
        return Err(Error::Indeterminate(
            "the pairing ∫ψψ vanishes; no Rayleigh quotient".into(),
        ));
    }
    Ok(sampling.integrate(&num)? / d)
}

/// `∫ψ*Hψ / ∫ψ*ψ` for real potentials, `∫ψHψ / ∫ψψ` otherwise.
pub fn rayleigh_energy(
    spec: &OscillatorSpec,
    config: &REConfig,
    state: &Eigenstate,
    sampling: &Sampling,
) -> Result<Complex64> {
    rayleigh_system(&ExtendedSystem::new(spec, config)?, state, sampling)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Grid;
    use crate::transform::CouplingValue;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn harmonic_ground_state() {
        let spec = OscillatorSpec::harmonic(vec![2.0]).unwrap();
        let cfg = REConfig::new(vec![0]).unwrap();
        let s = Sampling::new(vec![Grid::new(0.0, 8.0, 401).unwrap()]);
        let r = residual_scan(&spec, &cfg, &Eigenstate::ground(1), &s).unwrap();
        assert!(r.max_residual < 1e-7, "{}", r.max_residual);
        assert!((r.fitted_offset - c(-1.0, 0.0)).norm() < 1e-7);
        let e = rayleigh_energy(&spec, &cfg, &Eigenstate::ground(1), &s).unwrap();
        assert!((e - c(-1.0, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn offset_is_state_independent() {
        let spec = OscillatorSpec::linear(2.0, CouplingValue::real(0.3)).unwrap();
        let cfg = REConfig::new(vec![2]).unwrap();
        let sys = ExtendedSystem::new(&spec, &cfg).unwrap();
        let s = Sampling::automatic(&sys, 401).unwrap();
        let g = residual_scan(&spec, &cfg, &Eigenstate::ground(1), &s).unwrap();
        let e = residual_scan(&spec, &cfg, &Eigenstate::excited(&[0]).unwrap(), &s).unwrap();
        assert!(g.max_residual < 1e-6 && e.max_residual < 1e-6);
        assert!((g.fitted_offset - e.fitted_offset).norm() < 1e-5);
        assert!((g.fitted_offset - sys.ground_offset()).norm() < 1e-5);
    }

    #[test]
    fn minimax_fit_recovers_exact_scalar() {
        let psi: Vec<Complex64> = (0..50).map(|i| c((i as f64 * 0.3).sin(), 0.1 * i as f64)).collect();
        let k = c(0.7, -1.3);
        let u: Vec<Complex64> = psi.iter().map(|p| k * p).collect();
        let (fit, err) = minimax_scalar(&u, &psi);
        assert!((fit - k).norm() < 1e-14);
        assert!(err < 1e-13);
    }
}
