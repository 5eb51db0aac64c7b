use thiserror::Error;

/// Broad classes of failure, used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Validation,
    Numerical,
    Singular,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("shape mismatch: expected {expected}, found {found}")]
    Shape { expected: usize, found: usize },

    #[error("stencil at index {index} needs {needed} points on each side (grid has {len})")]
    Boundary {
        index: usize,
        needed: usize,
        len: usize,
    },

    #[error("polynomial degree {0} exceeds the exact-coefficient limit")]
    DegreeTooLarge(usize),

    #[error("no convergence after {iterations} iterations: {what}")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("degenerate transform: {0}")]
    DegenerateTransform(String),

    #[error("singular configuration: {0}")]
    Singular(String),

    #[error("coupling flavor mismatch: {0}")]
    FlavorMismatch(String),

    #[error("inadmissible co-dimension {m} on axis {axis}: {rule}")]
    Inadmissible {
        axis: usize,
        m: u32,
        rule: &'static str,
    },

    #[error("indeterminate: {0}")]
    Indeterminate(String),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::NoConvergence { .. } | Error::Indeterminate(_) | Error::DegreeTooLarge(_) => {
                ErrorClass::Numerical
            }
            Error::Singular(_) | Error::DegenerateTransform(_) => ErrorClass::Singular,
            _ => ErrorClass::Validation,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
