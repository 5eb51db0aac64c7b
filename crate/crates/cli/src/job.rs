use std::fs::OpenOptions;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use rexosc_core::model::{AxisState, Eigenstate, OscillatorSpec, Perturbation, REConfig};
use rexosc_core::transform::CouplingValue;
use serde::{Deserialize, Serialize};

use crate::args::{CaseArg, SpecArgs};
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Sampling box, resolution and energy cutoff.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSettings {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<f64>,
    /// Rational tilde-frequency ratios (`"1/3"`, `"1"`) for exact degeneracy grouping.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_ratios: Option<Vec<String>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSettings {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

/// Everything one invocation needs, as read from or written to a JSON job file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub spec: OscillatorSpec,
    pub config: REConfig,
    #[serde(default)]
    pub states: Vec<Eigenstate>,
    #[serde(default)]
    pub grids: GridSettings,
    #[serde(default)]
    pub outputs: OutputSettings,
    /// Co-dimensions tabulated by `table`, one row block each (one-dimensional only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub codimension_sweep: Option<Vec<u32>>,
}

impl JobConfig {
    /// Canonical JSON: pretty-printed, fixed field order, trailing newline.
    pub fn to_canonical_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("job serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("invalid job file: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read job file {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Model checks plus a writable output path.
    pub fn validate(&self) -> Result<(), CliError> {
        self.validate_model()?;
        if let Some(p) = &self.outputs.path {
            OpenOptions::new()
                .create(true)
                .append(true)
                .open(p)
                .map_err(|e| CliError::Usage(format!("output path {} is not writable: {e}", p.display())))?;
        }
        Ok(())
    }

    /// Shape checks and admissibility against the coupling flavors.
    pub fn validate_model(&self) -> Result<(), CliError> {
        let d = self.spec.dimension();
        if self.config.dimension() != d {
            return Err(CliError::Usage(format!(
                "{} co-dimension(s) given for a {d}-dimensional oscillator",
                self.config.dimension()
            )));
        }
        self.config.check_admissible(&self.spec)?;
        if let Some(sweep) = &self.codimension_sweep {
            if d != 1 {
                return Err(CliError::Usage("a co-dimension sweep needs one dimension".into()));
            }
            for &m in sweep {
                REConfig::new(vec![m])?.check_admissible(&self.spec)?;
            }
        }
        if let Some(st) = self.states.iter().find(|s| s.dimension() != d) {
            return Err(CliError::Usage(format!("state {st} does not have {d} axis entries")));
        }
        if let Some(b) = &self.grids.bounds {
            if b.len() != d {
                return Err(CliError::Usage(format!("{} box interval(s) for {d} dimensions", b.len())));
            }
            if let Some([lo, hi]) = b.iter().find(|[lo, hi]| !(lo.is_finite() && hi.is_finite() && lo < hi)) {
                return Err(CliError::Usage(format!("box interval {lo}:{hi} is empty or not finite")));
            }
        }
        if let Some(n) = self.grids.points {
            if n < 9 {
                return Err(CliError::Usage(format!("need at least 9 points per axis, got {n}")));
            }
        }
        if let Some(c) = self.grids.cutoff {
            if !(c.is_finite() && c >= 0.0) {
                return Err(CliError::Usage(format!("energy cutoff must be non-negative, got {c}")));
            }
        }
        Ok(())
    }
}

fn coupling(flag: &str, v: &Option<String>) -> Result<Option<CouplingValue>, CliError> {
    v.as_deref()
        .map(|s| s.parse().map_err(|e| CliError::Usage(format!("--{flag}: {e}"))))
        .transpose()
}

fn reject(flag: &str, present: bool, context: &str) -> Result<(), CliError> {
    if present {
        return Err(CliError::Usage(format!("--{flag} does not apply to {context}")));
    }
    Ok(())
}

pub fn spec_from_args(a: &SpecArgs) -> Result<OscillatorSpec, CliError> {
    if a.omega.is_empty() {
        return Err(CliError::Usage("--omega is required".into()));
    }
    let dim = a.dim.unwrap_or(match a.case {
        Some(_) => 3,
        None => a.omega.len(),
    });
    let linear = coupling("linear", &a.linear)?;
    let quad = coupling("coupling", &a.coupling)?;
    let l2 = coupling("lambda2", &a.lambda2)?;
    let l3 = coupling("lambda3", &a.lambda3)?;
    let need = |n: usize| -> Result<(), CliError> {
        if a.omega.len() != n {
            return Err(CliError::Usage(format!(
                "--omega needs {n} value(s) here, got {}",
                a.omega.len()
            )));
        }
        Ok(())
    };
    let spec = match dim {
        1 => {
            need(1)?;
            reject("coupling", quad.is_some(), "one dimension")?;
            reject("case", a.case.is_some(), "one dimension")?;
            let p = linear.map_or(Perturbation::None, |lambda0| Perturbation::Linear { lambda0 });
            OscillatorSpec::new(a.omega.clone(), p)?
        }
        2 => {
            need(2)?;
            reject("linear", linear.is_some(), "two dimensions")?;
            reject("case", a.case.is_some(), "two dimensions")?;
            let p = quad.map_or(Perturbation::None, |lambda| Perturbation::Quadratic2d { lambda });
            OscillatorSpec::new(a.omega.clone(), p)?
        }
        3 => match a.case.unwrap_or(CaseArg::Lq) {
            CaseArg::Lq => {
                need(3)?;
                let w = [a.omega[0], a.omega[1], a.omega[2]];
                if linear.is_none() && quad.is_none() {
                    OscillatorSpec::harmonic(w.to_vec())?
                } else {
                    OscillatorSpec::linear_quadratic_3d(
                        w,
                        linear.unwrap_or_else(CouplingValue::zero),
                        quad.unwrap_or_else(CouplingValue::zero),
                    )?
                }
            }
            case => {
                let (w, w3) = match a.omega.as_slice() {
                    [w, w3] => (*w, *w3),
                    [w, w2, w3] if w == w2 => (*w, *w3),
                    _ => {
                        return Err(CliError::Usage(
                            "--omega takes ω,ω₃ (or ω,ω,ω₃) in the q1 and q2 cases".into(),
                        ))
                    }
                };
                reject("linear", linear.is_some(), "the q1 and q2 cases")?;
                if case == CaseArg::Q1 {
                    reject("coupling", quad.is_some(), "q1 (use --lambda2/--lambda3)")?;
                    OscillatorSpec::quadratic_case_i(
                        w,
                        w3,
                        l2.unwrap_or_else(CouplingValue::zero),
                        l3.unwrap_or_else(CouplingValue::zero),
                    )?
                } else {
                    OscillatorSpec::quadratic_case_ii(
                        w,
                        w3,
                        a.lambda1.unwrap_or(0.0),
                        quad.unwrap_or_else(CouplingValue::zero),
                    )?
                }
            }
        },
        d => return Err(CliError::Usage(format!("--dim must be 1, 2 or 3, got {d}"))),
    };
    Ok(spec)
}

/// `g;0;1,2`: states separated by `;`, axes by `,`; one entry applies to every axis.
pub fn parse_states(text: &str, dim: usize) -> Result<Vec<Eigenstate>, CliError> {
    text.split(';')
        .map(|s| {
            let axes: Vec<AxisState> = s
                .split(',')
                .map(|t| match t.trim() {
                    "g" | "ground" => Ok(AxisState::Ground),
                    n => n
                        .parse()
                        .map(AxisState::Excited)
                        .map_err(|_| CliError::Usage(format!("bad state entry '{n}' (use g or an index)"))),
                })
                .collect::<Result<_, _>>()?;
            let axes = if axes.len() == 1 { vec![axes[0]; dim] } else { axes };
            Ok(Eigenstate::new(axes)?)
        })
        .collect()
}

fn parse_bounds(text: &str) -> Result<Vec<[f64; 2]>, CliError> {
    text.split(',')
        .map(|iv| {
            let (lo, hi) = iv
                .split_once(':')
                .ok_or_else(|| CliError::Usage(format!("box interval '{iv}' must be lo:hi")))?;
            let num = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| CliError::Usage(format!("bad number '{s}' in --bounds")))
            };
            Ok([num(lo)?, num(hi)?])
        })
        .collect()
}

pub fn default_states(dim: usize) -> Vec<Eigenstate> {
    let mut v = vec![Eigenstate::ground(dim)];
    for n in 0..2 {
        v.push(Eigenstate::excited(&vec![n; dim]).expect("valid dimension"));
    }
    v
}

/// Job assembled from flags; `sweep` makes a multi-valued `--m` a list of 1D co-dimensions.
pub fn job_from_args(a: &SpecArgs, sweep: bool) -> Result<JobConfig, CliError> {
    if let Some(path) = &a.job {
        let mut job = JobConfig::load(path)?;
        if a.format.is_some() {
            job.outputs.format = a.format;
        }
        if a.out.is_some() {
            job.outputs.path = a.out.clone();
        }
        return Ok(job);
    }
    let spec = spec_from_args(a)?;
    let d = spec.dimension();
    let (config, codimension_sweep) = if sweep && d == 1 && a.m.len() > 1 {
        (REConfig::new(vec![a.m[0]])?, Some(a.m.clone()))
    } else {
        let ms = match a.m.len() {
            0 => vec![0; d],
            1 => vec![a.m[0]; d],
            _ => a.m.clone(),
        };
        (REConfig::new(ms)?, None)
    };
    let states = match &a.states {
        Some(t) => parse_states(t, d)?,
        None => default_states(d),
    };
    Ok(JobConfig {
        spec,
        config,
        states,
        grids: GridSettings {
            bounds: a.bounds.as_deref().map(parse_bounds).transpose()?,
            points: a.points,
            cutoff: None,
            exact_ratios: None,
        },
        outputs: OutputSettings {
            format: a.format,
            path: a.out.clone(),
        },
        codimension_sweep,
    })
}
