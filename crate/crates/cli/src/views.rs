//! Serializable views of core results. Complex numbers become `{"re", "im"}` objects.

use num_complex::Complex64;
use rexosc_core::model::{CodimensionRule, SpectrumTable};
use rexosc_core::transform::{DecoupledSystem, RealityVerdict};
use rexosc_core::verify::{PoleLocus, PtEigenvalue, VerificationReport};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cx {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Cx {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

/// Fixed-precision decimal with trailing zeros trimmed, so goldens stay stable.
pub fn num(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x != 0.0 && (x.abs() < 1e-6 || x.abs() >= 1e12) {
        return format!("{x:.6e}");
    }
    let s = format!("{x:.12}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

pub fn cnum(z: Complex64) -> String {
    let tiny = 1e-14 * z.norm().max(1.0);
    if z.im.abs() <= tiny {
        num(z.re)
    } else if z.re.abs() <= tiny {
        format!("{}i", num(z.im))
    } else {
        let sign = if z.im < 0.0 { '-' } else { '+' };
        format!("{}{sign}{}i", num(z.re), num(z.im.abs()))
    }
}

#[derive(Debug, Serialize)]
pub struct MapView {
    pub rows: Vec<Vec<Cx>>,
    pub shift: Vec<Cx>,
}

#[derive(Debug, Serialize)]
pub struct ParametersView {
    pub k: Option<Cx>,
    pub a: Option<Cx>,
    pub b: Option<Cx>,
    pub c: Option<Cx>,
    pub d: Option<Cx>,
}

#[derive(Debug, Serialize)]
pub struct TransformView {
    pub dimension: usize,
    pub perturbation: &'static str,
    pub tilde_frequencies: Vec<Cx>,
    pub tilde_frequencies_squared: Vec<Cx>,
    /// `ω̃_i / ω̃_1`.
    pub ratio: Vec<Cx>,
    pub potential_constant: Cx,
    pub map: MapView,
    pub parameters: ParametersView,
    pub reality: RealityVerdict,
    pub admissible_codimensions: Vec<CodimensionRule>,
}

impl TransformView {
    pub fn new(
        perturbation: &'static str,
        sys: &DecoupledSystem,
        reality: RealityVerdict,
        rules: Vec<CodimensionRule>,
    ) -> Self {
        let d = sys.dimension();
        let w = &sys.tilde_frequencies;
        let p = sys.parameters;
        Self {
            dimension: d,
            perturbation,
            tilde_frequencies: w.iter().map(|&z| z.into()).collect(),
            tilde_frequencies_squared: w.iter().map(|&z| (z * z).into()).collect(),
            ratio: w.iter().map(|&z| (z / w[0]).into()).collect(),
            potential_constant: sys.potential_constant.into(),
            map: MapView {
                rows: (0..d).map(|i| sys.map.row(i).iter().map(|&z| z.into()).collect()).collect(),
                shift: sys.map.shift().iter().map(|&z| z.into()).collect(),
            },
            parameters: ParametersView {
                k: p.k.map(Into::into),
                a: p.a.map(Into::into),
                b: p.b.map(Into::into),
                c: p.c.map(Into::into),
                d: p.d.map(Into::into),
            },
            reality,
            admissible_codimensions: rules,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct DegeneracyView {
    pub dimension: usize,
    pub case: String,
    pub ratio: f64,
    /// Flavor-tagged coupling, e.g. `imaginary:2.6457513110645907`.
    pub coupling: String,
    pub coupling_value: Cx,
    pub coupling_squared: f64,
    pub tilde_frequencies: Vec<Cx>,
    pub spectrum_real: bool,
}

#[derive(Debug, Serialize)]
pub struct SpectrumEntryView {
    pub energy: Cx,
    pub multiplicity: usize,
    pub states: Vec<String>,
    pub complex: bool,
}

#[derive(Debug, Serialize)]
pub struct SpectrumView {
    pub cutoff: f64,
    pub entries: Vec<SpectrumEntryView>,
}

impl SpectrumView {
    pub fn new(cutoff: f64, t: &SpectrumTable) -> Self {
        Self {
            cutoff,
            entries: t
                .entries
                .iter()
                .map(|e| SpectrumEntryView {
                    energy: e.energy.into(),
                    multiplicity: e.multiplicity,
                    states: e.states.iter().map(|s| s.to_string()).collect(),
                    complex: e.complex,
                })
                .collect(),
        }
    }
}

/// CSV row of `spectrum`.
#[derive(Debug, Serialize)]
pub struct SpectrumRow {
    pub re_energy: f64,
    pub im_energy: f64,
    pub multiplicity: usize,
    pub states: String,
    pub complex: bool,
}

#[derive(Debug, Clone, Copy, Serialize)]
#[serde(untagged)]
pub enum PtView {
    Value(Cx),
    Tag(&'static str),
}

impl From<PtEigenvalue> for PtView {
    fn from(p: PtEigenvalue) -> Self {
        match p.value() {
            Some(z) => PtView::Value(z.into()),
            None => PtView::Tag("indeterminate"),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct StateView {
    pub state: String,
    pub relative_energy: Cx,
    pub max_residual: f64,
    pub fitted_offset: Cx,
    pub pt_eigenvalue: PtView,
    pub pt_fit_residual: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct ReportView {
    pub max_residual: f64,
    pub fitted_offset: Cx,
    pub offset_spread: f64,
    pub pole_list: Vec<PoleLocus>,
    pub pt_eigenvalue: PtView,
    pub parity: Option<String>,
    pub gram: Vec<Vec<Cx>>,
    pub gram_pairing: String,
    pub states: Vec<StateView>,
    pub notes: Vec<String>,
}

impl From<&VerificationReport> for ReportView {
    fn from(r: &VerificationReport) -> Self {
        Self {
            max_residual: r.max_residual,
            fitted_offset: r.fitted_offset.into(),
            offset_spread: r.offset_spread,
            pole_list: r.pole_list.clone(),
            pt_eigenvalue: r.pt_eigenvalue.into(),
            parity: r.parity.clone(),
            gram: r.gram.iter().map(|row| row.iter().map(|&z| z.into()).collect()).collect(),
            gram_pairing: r.gram_pairing.clone(),
            states: r
                .states
                .iter()
                .map(|s| StateView {
                    state: s.state.to_string(),
                    relative_energy: s.relative_energy.into(),
                    max_residual: s.max_residual,
                    fitted_offset: s.fitted_offset.into(),
                    pt_eigenvalue: s.pt_eigenvalue.into(),
                    pt_fit_residual: s.pt_fit_residual,
                })
                .collect(),
            notes: r.notes.clone(),
        }
    }
}

/// CSV row of `table`.
#[derive(Debug, Serialize)]
pub struct TableRow {
    pub m: u32,
    pub state: String,
    pub x: f64,
    #[serde(rename = "re_V")]
    pub re_v: f64,
    #[serde(rename = "im_V")]
    pub im_v: f64,
    pub re_psi: f64,
    pub im_psi: f64,
}

/// CSV row of `plotdata`; `y` is 0 in one dimension.
#[derive(Debug, Serialize)]
pub struct PlotRow {
    pub x: f64,
    pub y: f64,
    #[serde(rename = "re_V")]
    pub re_v: f64,
    #[serde(rename = "im_V")]
    pub im_v: f64,
    pub re_psi: f64,
    pub im_psi: f64,
}
