use std::fmt;

use serde::{Deserialize, Serialize};

use super::{OscillatorSpec, Perturbation};
use crate::error::{Error, Result};
use crate::poly::MAX_DEGREE;

/// Co-dimensions `m_i` of the pseudo-Hermite seeds, one per tilde axis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct REConfig {
    codimensions: Vec<u32>,
}

impl REConfig {
    pub fn new(codimensions: Vec<u32>) -> Result<Self> {
        if !(1..=3).contains(&codimensions.len()) {
            return Err(Error::Domain(format!(
                "need one co-dimension per axis (1..=3), got {}",
                codimensions.len()
            )));
        }
        if let Some(&m) = codimensions.iter().find(|&&m| m as usize >= MAX_DEGREE) {
            return Err(Error::DegreeTooLarge(m as usize));
        }
        Ok(Self { codimensions })
    }

    pub fn uniform(dimension: usize, m: u32) -> Result<Self> {
        Self::new(vec![m; dimension])
    }

    pub fn codimensions(&self) -> &[u32] {
        &self.codimensions
    }

    pub fn dimension(&self) -> usize {
        self.codimensions.len()
    }

    pub(crate) fn check_dimension(&self, spec: &OscillatorSpec) -> Result<()> {
        if self.dimension() != spec.dimension() {
            return Err(Error::Shape {
                expected: spec.dimension(),
                found: self.dimension(),
            });
        }
        Ok(())
    }

    /// Error unless every co-dimension obeys its axis rule.
    pub fn check_admissible(&self, spec: &OscillatorSpec) -> Result<()> {
        self.check_dimension(spec)?;
        for (axis, (rule, &m)) in admissible_codimensions(spec)
            .iter()
            .zip(&self.codimensions)
            .enumerate()
        {
            if !rule.allows(m) {
                return Err(Error::Inadmissible {
                    axis,
                    m,
                    rule: rule.description(),
                });
            }
        }
        Ok(())
    }

    pub fn is_admissible(&self, spec: &OscillatorSpec) -> bool {
        self.check_admissible(spec).is_ok()
    }
}

impl TryFrom<Vec<u32>> for REConfig {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<REConfig> for Vec<u32> {
    fn from(c: REConfig) -> Self {
        c.codimensions
    }
}

/// Level on one tilde axis: the extended ground state or the `(n+1)`-th excited one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisState {
    Ground,
    Excited(u32),
}

impl AxisState {
    /// Number of nodes of the numerator beyond the seed, used for ordering.
    pub fn rank(&self) -> u32 {
        match self {
            AxisState::Ground => 0,
            AxisState::Excited(n) => n + 1,
        }
    }
}

impl fmt::Display for AxisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxisState::Ground => write!(f, "g"),
            AxisState::Excited(n) => write!(f, "{n}"),
        }
    }
}

/// A product eigenstate, one axis state per tilde axis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<AxisState>", into = "Vec<AxisState>")]
pub struct Eigenstate {
    axes: Vec<AxisState>,
}

impl Eigenstate {
    pub fn new(axes: Vec<AxisState>) -> Result<Self> {
        if !(1..=3).contains(&axes.len()) {
            return Err(Error::Domain(format!(
                "need one axis state per axis (1..=3), got {}",
                axes.len()
            )));
        }
        Ok(Self { axes })
    }

    pub fn ground(dimension: usize) -> Self {
        Self {
            axes: vec![AxisState::Ground; dimension],
        }
    }

    pub fn excited(ns: &[u32]) -> Result<Self> {
        Self::new(ns.iter().map(|&n| AxisState::Excited(n)).collect())
    }

    pub fn axes(&self) -> &[AxisState] {
        &self.axes
    }

    pub fn dimension(&self) -> usize {
        self.axes.len()
    }
}

impl fmt::Display for Eigenstate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.axes.iter().map(|a| a.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl TryFrom<Vec<AxisState>> for Eigenstate {
    type Error = Error;
    fn try_from(v: Vec<AxisState>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Eigenstate> for Vec<AxisState> {
    fn from(s: Eigenstate) -> Self {
        s.axes
    }
}

/// Which co-dimensions leave an axis free of real poles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CodimensionRule {
    EvenOnly,
    EvenAndOdd,
}

impl CodimensionRule {
    pub fn allows(&self, m: u32) -> bool {
        match self {
            CodimensionRule::EvenOnly => m.is_multiple_of(2),
            CodimensionRule::EvenAndOdd => true,
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            CodimensionRule::EvenOnly => "only even co-dimensions are regular on this axis",
            CodimensionRule::EvenAndOdd => "any co-dimension is regular on this axis",
        }
    }
}

/// Per tilde axis: odd co-dimensions are allowed only on an axis carrying an
/// imaginary linear shift.
pub fn admissible_codimensions(spec: &OscillatorSpec) -> Vec<CodimensionRule> {
    let mut rules = vec![CodimensionRule::EvenOnly; spec.dimension()];
    match *spec.perturbation() {
        Perturbation::Linear { lambda0 } if lambda0.is_imaginary() => {
            rules[0] = CodimensionRule::EvenAndOdd;
        }
        Perturbation::LinearQuadratic3d { lambda0, .. } if lambda0.is_imaginary() => {
            rules[2] = CodimensionRule::EvenAndOdd;
        }
        _ => {}
    }
    rules
}
