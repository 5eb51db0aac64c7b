//! Independent numerical checks of the closed-form constructions: Schrödinger
//! residuals, Rayleigh quotients, PT eigenvalues, Gram matrices, real-pole
//! scans, a grid-diagonalization oracle and the metric condition.

mod eta;
mod gram;
mod grid;
mod poles;
mod pt;
mod report;
mod residual;
mod sampling;

pub use eta::{measured_tilde_frequencies_2d, pseudo_hermiticity_check, MeasuredFrequencies};
pub use gram::{bilinear_gram, max_off_diagonal, orthogonality_gram, Pairing};
pub use grid::{gaps, grid_spectrum, grid_spectrum_extrapolated};
pub use poles::{distance_to_poles, pole_scan, seed_zeros, PoleLocus};
pub use pt::{predicted_pt_sign, pt_parity_eigenvalue, PtMeasurement, PT_FIT_TOLERANCE};
pub use report::{choose_parity, default_points, verify, IndeterminateTag, PtEigenvalue, StateReport, VerificationReport};
pub use residual::{rayleigh_energy, residual_scan, ResidualScan};
pub use sampling::{Sampling, GUARD_SPACINGS, STENCIL_STEP};
