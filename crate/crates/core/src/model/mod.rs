//! Base and rationally extended potentials, eigenfunctions, energies and spectra.

mod config;
mod energy;
mod extended;
mod oscillator;
mod spectrum;

pub use config::{admissible_codimensions, AxisState, CodimensionRule, Eigenstate, REConfig};
pub use energy::{relative_energy, unextended_energy, unextended_energy_ratio_form};
pub use extended::{
    eigenfunction, rational_term_1d, re_potential, AxisFactor, ExtendedAxis, ExtendedSystem,
    StateFunction, POLE_TOLERANCE,
};
pub use oscillator::{OscillatorSpec, Perturbation};
pub use spectrum::{spectrum, Grouping, SpectrumEntry, SpectrumTable, GROUPING_TOLERANCE};
