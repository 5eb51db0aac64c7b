use num_complex::Complex64;
use rayon::prelude::*;

use super::sampling::Sampling;
use crate::error::{Error, Result};
use crate::model::{Eigenstate, ExtendedSystem, OscillatorSpec, REConfig};

/// Inner product used for a Gram matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pairing {
    /// `∫ψ_i* ψ_j`.
    Hermitian,
    /// `∫ψ_i ψ_j`, a convention for non-Hermitian potentials.
    Bilinear,
}

pub(crate) fn gram_system(
    sys: &ExtendedSystem,
    states: &[Eigenstate],
    sampling: &Sampling,
    pairing: Pairing,
) -> Result<Vec<Vec<Complex64>>> {
    sampling.check(sys)?;
    let loci = sampling.poles(sys)?;
    let usable = sampling.usable(&loci);
    let samples = states
        .par_iter()
        .map(|st| {
            let psi = sys.state(st)?;
            (0..sampling.len())
                .map(|i| {
                    if usable[i] {
                        psi.evaluate_real(&sampling.point(i))
                    } else {
                        Ok(Complex64::new(0.0, 0.0))
                    }
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let pair = |a: &[Complex64], b: &[Complex64]| -> Result<Complex64> {
        let prod: Vec<Complex64> = a
            .iter()
            .zip(b)
            .map(|(x, y)| match pairing {
                Pairing::Hermitian => x.conj() * y,
                Pairing::Bilinear => x * y,
            })
            .collect();
        sampling.integrate(&prod)
    };
    let n = states.len();
    let raw = (0..n * n)
        .into_par_iter()
        .map(|k| pair(&samples[k / n], &samples[k % n]))
        .collect::<Result<Vec<_>>>()?;
    let norms: Vec<Complex64> = (0..n).map(|i| raw[i * n + i].sqrt()).collect();
    if let Some(i) = norms.iter().position(|z| z.norm() < 1e-300) {
        return Err(Error::Indeterminate(format!(
            "state {} has vanishing self-pairing",
            states[i]
        )));
    }
    Ok((0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let d = match pairing {
                        Pairing::Hermitian => norms[i].conj() * norms[j],
                        Pairing::Bilinear => norms[i] * norms[j],
                    };
                    if i == j {
                        Complex64::new(1.0, 0.0)
                    } else {
                        raw[i * n + j] / d
                    }
                })
                .collect()
        })
        .collect())
}

/// Gram matrix of the normalized eigenfunctions; refuses complex potentials.
pub fn orthogonality_gram(
    spec: &OscillatorSpec,
    config: &REConfig,
    states: &[Eigenstate],
    sampling: &Sampling,
) -> Result<Vec<Vec<Complex64>>> {
    if !spec.is_hermitian() {
        return Err(Error::Domain(
            "the potential is complex; the Hermitian Gram matrix is not defined (use the bilinear pairing)".into(),
        ));
    }
    gram_system(&ExtendedSystem::new(spec, config)?, states, sampling, Pairing::Hermitian)
}

/// Gram matrix under the non-conjugated pairing `∫ψ_i ψ_j`, normalized so the diagonal is 1.
pub fn bilinear_gram(
    spec: &OscillatorSpec,
    config: &REConfig,
    states: &[Eigenstate],
    sampling: &Sampling,
) -> Result<Vec<Vec<Complex64>>> {
    gram_system(&ExtendedSystem::new(spec, config)?, states, sampling, Pairing::Bilinear)
}

/// Largest off-diagonal magnitude.
pub fn max_off_diagonal(gram: &[Vec<Complex64>]) -> f64 {
    let mut worst = 0.0f64;
    for (i, row) in gram.iter().enumerate() {
        for (j, z) in row.iter().enumerate() {
            if i != j {
                worst = worst.max(z.norm());
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Grid;
    use crate::transform::CouplingValue;

    #[test]
    fn extended_states_are_orthogonal() {
        let spec = OscillatorSpec::harmonic(vec![2.0]).unwrap();
        let cfg = REConfig::new(vec![2]).unwrap();
        let s = Sampling::new(vec![Grid::new(0.0, 9.0, 601).unwrap()]);
        let states = [
            Eigenstate::ground(1),
            Eigenstate::excited(&[0]).unwrap(),
            Eigenstate::excited(&[1]).unwrap(),
        ];
        let g = orthogonality_gram(&spec, &cfg, &states, &s).unwrap();
        assert!(max_off_diagonal(&g) < 1e-7, "{g:?}");
        assert_eq!(g[1][1], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn complex_potential_is_refused() {
        let spec = OscillatorSpec::linear(2.0, CouplingValue::imaginary(1.0)).unwrap();
        let cfg = REConfig::new(vec![0]).unwrap();
        let s = Sampling::new(vec![Grid::new(0.0, 9.0, 201).unwrap()]);
        let st = [Eigenstate::ground(1), Eigenstate::excited(&[0]).unwrap()];
        assert!(matches!(orthogonality_gram(&spec, &cfg, &st, &s), Err(Error::Domain(_))));
        let b = bilinear_gram(&spec, &cfg, &st, &s).unwrap();
        assert!(max_off_diagonal(&b) < 1e-7);
    }
}
