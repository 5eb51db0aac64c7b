use rexosc_core::{Error, ErrorClass};

/// Exit status for validation failures (bad flags, inadmissible or non-real configurations).
pub const EXIT_VALIDATION: i32 = 1;
/// Exit status for numerical failures.
pub const EXIT_NUMERICAL: i32 = 2;
/// Exit status for singular configurations.
pub const EXIT_SINGULAR: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Core(#[from] Error),
    #[error("output failed: {0}")]
    Io(#[from] std::io::Error),
    #[error("output failed: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e.class() {
                ErrorClass::Validation => EXIT_VALIDATION,
                ErrorClass::Numerical => EXIT_NUMERICAL,
                ErrorClass::Singular => EXIT_SINGULAR,
            },
            _ => EXIT_VALIDATION,
        }
    }
}
