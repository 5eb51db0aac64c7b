use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::gram::{gram_system, max_off_diagonal, Pairing};
use super::poles::PoleLocus;
use super::pt::{pt_measure_system, PT_FIT_TOLERANCE};
use super::residual::residual_scan_system;
use super::sampling::Sampling;
use crate::error::{Error, Result};
use crate::model::{Eigenstate, ExtendedSystem, OscillatorSpec, REConfig};
use crate::transform::{pt_classification, ParityOperator};

/// A PT eigenvalue, or a marker that the state is not a PT eigenfunction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PtEigenvalue {
    Value(Complex64),
    Indeterminate(IndeterminateTag),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IndeterminateTag {
    Indeterminate,
}

impl PtEigenvalue {
    pub fn value(&self) -> Option<Complex64> {
        match self {
            PtEigenvalue::Value(z) => Some(*z),
            PtEigenvalue::Indeterminate(_) => None,
        }
    }
}

/// Checks on one eigenstate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateReport {
    pub state: Eigenstate,
    pub relative_energy: Complex64,
    pub max_residual: f64,
    pub fitted_offset: Complex64,
    pub pt_eigenvalue: PtEigenvalue,
    pub pt_fit_residual: Option<f64>,
}

/// Everything the verifier measured for one spec and configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    /// Worst normalized residual over all states.
    pub max_residual: f64,
    /// Offset of the first state; the others agree when the ladder is consistent.
    pub fitted_offset: Complex64,
    /// Spread of the fitted offsets across states.
    pub offset_spread: f64,
    pub pole_list: Vec<PoleLocus>,
    /// PT eigenvalue of the first state.
    pub pt_eigenvalue: PtEigenvalue,
    /// Parity operator used for the PT measurement.
    pub parity: Option<String>,
    pub gram: Vec<Vec<Complex64>>,
    pub gram_pairing: String,
    pub states: Vec<StateReport>,
    pub notes: Vec<String>,
}

/// Parity operator used when measuring PT eigenvalues: a tabulated operator the
/// sampling confirms, else any confirmed one, else the identity for real potentials.
pub fn choose_parity(spec: &OscillatorSpec) -> Option<ParityOperator> {
    let pt = pt_classification(spec);
    if let Some(p) = pt
        .assigned
        .iter()
        .find(|p| pt.symmetric.iter().any(|s| s.name == p.name))
    {
        return Some(p.clone());
    }
    if pt.potential_real {
        return Some(ParityOperator::identity(spec.dimension()));
    }
    pt.symmetric.first().cloned()
}

/// Run residual, pole, PT and Gram checks on `states`.
pub fn verify(
    spec: &OscillatorSpec,
    config: &REConfig,
    states: &[Eigenstate],
    sampling: Option<&Sampling>,
) -> Result<VerificationReport> {
    if states.is_empty() {
        return Err(Error::Domain("no states to verify".into()));
    }
    let sys = ExtendedSystem::new(spec, config)?;
    let owned;
    let sampling = match sampling {
        Some(s) => s,
        None => {
            owned = Sampling::automatic(&sys, default_points(sys.dimension()))?;
            &owned
        }
    };
    let mut notes = Vec::new();
    let pole_list = sampling.poles(&sys)?;
    if !pole_list.is_empty() {
        notes.push(format!(
            "{} real pole locus/loci in the box; points within {} spacings are skipped",
            pole_list.len(),
            sampling.guard_spacings
        ));
    }
    if !config.is_admissible(spec) {
        notes.push("co-dimensions are not admissible for this coupling flavor".into());
    }
    let parity = choose_parity(spec);
    match &parity {
        Some(p) if p.name == "I" => notes.push("real potential: PT measured with the identity parity".into()),
        Some(_) => {}
        None => notes.push("no confirmed PT parity operator; PT eigenvalues not measured".into()),
    }
    let pt = pt_classification(spec);
    for p in pt.unconfirmed() {
        notes.push(format!("tabulated operator {} fails the sampled PT test", p.name));
    }

    let mut reports = Vec::with_capacity(states.len());
    for st in states {
        let r = residual_scan_system(&sys, st, sampling)?;
        let (pt_eigenvalue, pt_fit_residual) = match &parity {
            Some(p) => match pt_measure_system(&sys, st, p, sampling) {
                Ok(m) if m.fit_residual <= PT_FIT_TOLERANCE => (PtEigenvalue::Value(m.eigenvalue), Some(m.fit_residual)),
                Ok(m) => (PtEigenvalue::Indeterminate(IndeterminateTag::Indeterminate), Some(m.fit_residual)),
                Err(Error::Indeterminate(_)) => (PtEigenvalue::Indeterminate(IndeterminateTag::Indeterminate), None),
                Err(e) => return Err(e),
            },
            None => (PtEigenvalue::Indeterminate(IndeterminateTag::Indeterminate), None),
        };
        reports.push(StateReport {
            state: st.clone(),
            relative_energy: r.relative_energy,
            max_residual: r.max_residual,
            fitted_offset: r.fitted_offset,
            pt_eigenvalue,
            pt_fit_residual,
        });
    }

    let pairing = if spec.is_hermitian() { Pairing::Hermitian } else { Pairing::Bilinear };
    if pairing == Pairing::Bilinear {
        notes.push("complex potential: Gram matrix uses the bilinear pairing ∫ψ_iψ_j by convention".into());
    }
    let gram = gram_system(&sys, states, sampling, pairing)?;
    if states.len() > 1 {
        notes.push(format!("largest Gram off-diagonal {:.3e}", max_off_diagonal(&gram)));
    }
    let first = reports[0].fitted_offset;
    let offset_spread = reports
        .iter()
        .map(|r| (r.fitted_offset - first).norm())
        .fold(0.0, f64::max);
    Ok(VerificationReport {
        max_residual: reports.iter().map(|r| r.max_residual).fold(0.0, f64::max),
        fitted_offset: first,
        offset_spread,
        pole_list,
        pt_eigenvalue: reports[0].pt_eigenvalue,
        parity: parity.map(|p| p.name),
        gram,
        gram_pairing: match pairing {
            Pairing::Hermitian => "hermitian".into(),
            Pairing::Bilinear => "bilinear".into(),
        },
        states: reports,
        notes,
    })
}

/// Default points per axis for automatic sampling.
pub fn default_points(dimension: usize) -> usize {
    match dimension {
        1 => 601,
        2 => 121,
        _ => 41,
    }
}
