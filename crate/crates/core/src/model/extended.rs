use num_complex::Complex64;

use super::{AxisState, Eigenstate, OscillatorSpec, REConfig};
use crate::error::{Error, Result};
use crate::poly::{exceptional_hermite, pseudo_hermite, Polynomial};
use crate::transform::{CoordinateMap, DecoupledSystem};

/// `|𝓗_m(z)|` below this fraction of `Σ|c_k||z|^k` is treated as a zero.
pub const POLE_TOLERANCE: f64 = 1e-13;

/// One tilde axis of an extended oscillator: frequency `ω̃`, co-dimension `m`
/// and the seed `𝓗_m(√(ω̃/2) x̃)` with its derivatives.
#[derive(Debug, Clone)]
pub struct ExtendedAxis {
    omega: Complex64,
    m: u32,
    scale: Complex64,
    seed: Polynomial,
    seed_d1: Polynomial,
    seed_d2: Polynomial,
    seed_abs: Polynomial,
}

impl ExtendedAxis {
    pub fn new(omega: Complex64, m: u32) -> Result<Self> {
        let seed = pseudo_hermite(m as usize)?;
        let seed_d1 = seed.derivative();
        let seed_d2 = seed_d1.derivative();
        let seed_abs = Polynomial::new(
            seed.coefficients()
                .iter()
                .map(|c| Complex64::new(c.norm(), 0.0))
                .collect(),
        );
        Ok(Self {
            omega,
            m,
            scale: (omega / 2.0).sqrt(),
            seed,
            seed_d1,
            seed_d2,
            seed_abs,
        })
    }

    pub fn omega(&self) -> Complex64 {
        self.omega
    }

    pub fn codimension(&self) -> u32 {
        self.m
    }

    /// `√(ω̃/2)`, the factor taking `x̃` to the polynomial argument.
    pub fn scale(&self) -> Complex64 {
        self.scale
    }

    pub fn seed(&self) -> &Polynomial {
        &self.seed
    }

    /// Seed value at `z`, or a singularity error at one of its zeros.
    fn seed_at(&self, z: Complex64) -> Result<Complex64> {
        let h = self.seed.evaluate(z);
        let size = self.seed_abs.evaluate(Complex64::new(z.norm(), 0.0)).re;
        if h.norm() <= POLE_TOLERANCE * size {
            return Err(Error::Singular(format!(
                "pseudo-Hermite seed of co-dimension {} vanishes at argument {z}",
                self.m
            )));
        }
        Ok(h)
    }

    /// `−ω̃ [𝓗''/𝓗 − (𝓗'/𝓗)² + 1]` at `z = √(ω̃/2) x̃`.
    pub fn rational_term(&self, x_tilde: Complex64) -> Result<Complex64> {
        let z = self.scale * x_tilde;
        let h = self.seed_at(z)?;
        let r1 = self.seed_d1.evaluate(z) / h;
        let r2 = self.seed_d2.evaluate(z) / h;
        Ok(-self.omega * (r2 - r1 * r1 + 1.0))
    }

    /// `¼ ω̃² x̃² + V_rat(x̃)`, the one-dimensional extended potential without constants.
    pub fn potential(&self, x_tilde: Complex64) -> Result<Complex64> {
        Ok(0.25 * self.omega * self.omega * x_tilde * x_tilde + self.rational_term(x_tilde)?)
    }

    pub fn factor(&self, state: AxisState) -> Result<AxisFactor> {
        let (numerator, phase) = match state {
            AxisState::Ground => {
                // Odd seeds pick up a factor i so the ground state is PT-even.
                let phase = if self.m % 2 == 1 {
                    Complex64::new(0.0, 1.0)
                } else {
                    Complex64::new(1.0, 0.0)
                };
                (None, phase)
            }
            AxisState::Excited(n) => (
                Some(exceptional_hermite(self.m as usize, n as usize + 1)?),
                Complex64::new(1.0, 0.0),
            ),
        };
        Ok(AxisFactor {
            axis: self.clone(),
            numerator,
            phase,
        })
    }

    /// Contribution `(n + m + 1) ω̃` of an excited level, zero for the ground level.
    pub fn relative_energy(&self, state: AxisState) -> Complex64 {
        match state {
            AxisState::Ground => Complex64::new(0.0, 0.0),
            AxisState::Excited(n) => (n + self.m + 1) as f64 * self.omega,
        }
    }

    /// Absolute energy in the axis potential `¼ω̃²x̃² + V_rat`.
    pub fn absolute_energy(&self, state: AxisState) -> Complex64 {
        match state {
            AxisState::Ground => -((2 * self.m + 1) as f64) * self.omega / 2.0,
            AxisState::Excited(n) => (n as f64 + 0.5) * self.omega,
        }
    }
}

/// One-axis wavefunction `phase · e^{−ω̃x̃²/4} · N(z) / 𝓗_m(z)`.
#[derive(Debug, Clone)]
pub struct AxisFactor {
    axis: ExtendedAxis,
    numerator: Option<Polynomial>,
    phase: Complex64,
}

impl AxisFactor {
    pub fn evaluate(&self, x_tilde: Complex64) -> Result<Complex64> {
        let z = self.axis.scale * x_tilde;
        let h = self.axis.seed_at(z)?;
        let gauss = (-self.axis.omega * x_tilde * x_tilde / 4.0).exp();
        let num = self
            .numerator
            .as_ref()
            .map_or(Complex64::new(1.0, 0.0), |p| p.evaluate(z));
        Ok(self.phase * gauss * num / h)
    }
}

/// `V_rat` for a single axis of frequency `ω` and co-dimension `m`.
pub fn rational_term_1d(omega: Complex64, m: u32, x_tilde: Complex64) -> Result<Complex64> {
    ExtendedAxis::new(omega, m)?.rational_term(x_tilde)
}

/// A decoupled oscillator with one extended axis per tilde coordinate.
#[derive(Debug, Clone)]
pub struct ExtendedSystem {
    spec: OscillatorSpec,
    config: REConfig,
    decoupled: DecoupledSystem,
    axes: Vec<ExtendedAxis>,
}

impl ExtendedSystem {
    /// Admissibility is not enforced here so that singular extensions stay evaluable off their poles.
    pub fn new(spec: &OscillatorSpec, config: &REConfig) -> Result<Self> {
        config.check_dimension(spec)?;
        let decoupled = spec.decouple()?;
        let axes = decoupled
            .tilde_frequencies
            .iter()
            .zip(config.codimensions())
            .map(|(&w, &m)| ExtendedAxis::new(w, m))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            spec: spec.clone(),
            config: config.clone(),
            decoupled,
            axes,
        })
    }

    pub fn spec(&self) -> &OscillatorSpec {
        &self.spec
    }

    pub fn config(&self) -> &REConfig {
        &self.config
    }

    pub fn decoupled(&self) -> &DecoupledSystem {
        &self.decoupled
    }

    pub fn map(&self) -> &CoordinateMap {
        &self.decoupled.map
    }

    pub fn axes(&self) -> &[ExtendedAxis] {
        &self.axes
    }

    pub fn dimension(&self) -> usize {
        self.axes.len()
    }

    fn check_state(&self, state: &Eigenstate) -> Result<()> {
        if state.dimension() != self.dimension() {
            return Err(Error::Shape {
                expected: self.dimension(),
                found: state.dimension(),
            });
        }
        Ok(())
    }

    /// Base potential in the original coordinates plus the rational term of every tilde axis.
    pub fn potential(&self, p: &[Complex64]) -> Result<Complex64> {
        let base = self.spec.base_potential(p)?;
        let tilde = self.decoupled.map.forward(p);
        let mut v = base;
        for (axis, &t) in self.axes.iter().zip(&tilde) {
            v += axis.rational_term(t)?;
        }
        Ok(v)
    }

    pub fn potential_real(&self, p: &[f64]) -> Result<Complex64> {
        self.potential(&complexify(p))
    }

    pub fn state(&self, state: &Eigenstate) -> Result<StateFunction> {
        self.check_state(state)?;
        let factors = self
            .axes
            .iter()
            .zip(state.axes())
            .map(|(a, &s)| a.factor(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(StateFunction {
            factors,
            map: self.decoupled.map.clone(),
        })
    }

    /// Energy measured from the extended ground level.
    pub fn relative_energy(&self, state: &Eigenstate) -> Result<Complex64> {
        self.check_state(state)?;
        Ok(self
            .axes
            .iter()
            .zip(state.axes())
            .map(|(a, &s)| a.relative_energy(s))
            .sum())
    }

    /// Eigenvalue of `−∇² + V` for the state, derived axis by axis.
    pub fn absolute_energy(&self, state: &Eigenstate) -> Result<Complex64> {
        self.check_state(state)?;
        Ok(self
            .axes
            .iter()
            .zip(state.axes())
            .map(|(a, &s)| a.absolute_energy(s))
            .sum::<Complex64>()
            + self.decoupled.potential_constant)
    }

    /// Absolute energy of the extended ground level: `Σ −(2m_i+1)ω̃_i/2 + constant`.
    pub fn ground_offset(&self) -> Complex64 {
        self.absolute_energy(&Eigenstate::ground(self.dimension()))
            .expect("ground state has matching dimension")
    }
}

/// An eigenfunction in the original coordinates, built as a product over tilde axes.
#[derive(Debug, Clone)]
pub struct StateFunction {
    factors: Vec<AxisFactor>,
    map: CoordinateMap,
}

impl StateFunction {
    pub fn evaluate(&self, p: &[Complex64]) -> Result<Complex64> {
        let tilde = self.map.forward(p);
        let mut psi = Complex64::new(1.0, 0.0);
        for (f, &t) in self.factors.iter().zip(&tilde) {
            psi *= f.evaluate(t)?;
        }
        Ok(psi)
    }

    pub fn evaluate_real(&self, p: &[f64]) -> Result<Complex64> {
        self.evaluate(&complexify(p))
    }
}

pub(crate) fn complexify(p: &[f64]) -> Vec<Complex64> {
    p.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}

/// Extended potential of `spec` with co-dimensions `config` at `point`.
pub fn re_potential(spec: &OscillatorSpec, config: &REConfig, point: &[Complex64]) -> Result<Complex64> {
    ExtendedSystem::new(spec, config)?.potential(point)
}

/// Unnormalized eigenfunction of the extended potential at `point`.
pub fn eigenfunction(
    spec: &OscillatorSpec,
    config: &REConfig,
    state: &Eigenstate,
    point: &[Complex64],
) -> Result<Complex64> {
    ExtendedSystem::new(spec, config)?
        .state(state)?
        .evaluate(point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::CouplingValue;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    #[test]
    fn rational_term_low_orders() {
        let w = c(1.7, 0.0);
        for x in [c(0.3, 0.0), c(-1.2, 0.4), c(2.0, -0.7)] {
            assert!(rel(rational_term_1d(w, 0, x).unwrap(), -w) < 1e-15);
            let m2 = -w - 8.0 * w.powi(7) / (w.powi(3) + w.powi(4) * x * x).powi(2)
                + 4.0 * w.powi(4) / (w.powi(3) + w.powi(4) * x * x);
            assert!(rel(rational_term_1d(w, 2, x).unwrap(), m2) < 1e-13);
            assert!(rel(rational_term_1d(w, 1, x).unwrap(), -w + 2.0 / (x * x)) < 1e-13);
        }
        assert!(matches!(
            rational_term_1d(w, 1, c(0.0, 0.0)),
            Err(Error::Singular(_))
        ));
    }

    #[test]
    fn eigenfunction_examples() {
        let spec = OscillatorSpec::harmonic(vec![2.0]).unwrap();
        let cfg = REConfig::new(vec![0]).unwrap();
        let g = Eigenstate::ground(1);
        for x in [-1.5, 0.0, 0.7] {
            let psi = eigenfunction(&spec, &cfg, &g, &[c(x, 0.0)]).unwrap();
            assert!(rel(psi, c((-x * x / 2.0).exp(), 0.0)) < 1e-15);
        }
        let cfg = REConfig::new(vec![2]).unwrap();
        let st = Eigenstate::excited(&[0]).unwrap();
        let w = 2.0f64;
        for x in [-1.5, 0.3, 0.7] {
            let z = (w / 2.0).sqrt() * x;
            let want = (-w * x * x / 4.0).exp() * (8.0 * z.powi(3) + 12.0 * z) / (4.0 * z * z + 2.0);
            let psi = eigenfunction(&spec, &cfg, &st, &[c(x, 0.0)]).unwrap();
            assert!(rel(psi, c(want, 0.0)) < 1e-14);
        }
    }

    #[test]
    fn energies() {
        let spec = OscillatorSpec::harmonic(vec![1.5]).unwrap();
        let sys = ExtendedSystem::new(&spec, &REConfig::new(vec![2]).unwrap()).unwrap();
        assert_eq!(sys.relative_energy(&Eigenstate::excited(&[0]).unwrap()).unwrap(), c(4.5, 0.0));
        assert_eq!(sys.relative_energy(&Eigenstate::ground(1)).unwrap(), c(0.0, 0.0));
        assert_eq!(sys.ground_offset(), c(-3.75, 0.0));
        let spec = OscillatorSpec::linear(2.0, CouplingValue::imaginary(1.0)).unwrap();
        let sys = ExtendedSystem::new(&spec, &REConfig::new(vec![0]).unwrap()).unwrap();
        assert!(rel(sys.ground_offset(), c(-0.75, 0.0)) < 1e-15);
        assert!(sys.state(&Eigenstate::ground(2)).is_err());
    }

    #[test]
    fn potential_is_base_plus_rational() {
        let spec = OscillatorSpec::quadratic_2d(1.0, 2.0, CouplingValue::real(7f64.sqrt() / 2.0)).unwrap();
        let sys = ExtendedSystem::new(&spec, &REConfig::new(vec![0, 0]).unwrap()).unwrap();
        let w = &sys.decoupled().tilde_frequencies;
        for p in [[0.3, -0.4], [1.0, 2.0]] {
            let v = sys.potential_real(&p).unwrap();
            let want = spec.base_potential_real(&p).unwrap() - w[0] - w[1];
            assert!(rel(v, want) < 1e-14);
        }
    }
}
