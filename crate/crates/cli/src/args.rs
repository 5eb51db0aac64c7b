use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "rexosc",
    version,
    about = "Rationally extended oscillators: closed forms, spectra, transforms and numerical verification"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample one-dimensional extended potentials and eigenfunctions, one row per (m, state, x).
    Table(TableArgs),
    /// Relative energy levels up to a cutoff, grouped by degeneracy.
    Spectrum(SpectrumArgs),
    /// Residual, pole, PT and Gram checks of the closed-form eigenfunctions.
    Verify(VerifyArgs),
    /// Coupling that puts the tilde frequencies in a requested ratio.
    Degeneracy(DegeneracyArgs),
    /// Coordinate map, rotation parameters, tilde frequencies and reality verdict.
    Transform(TransformArgs),
    /// Long-form grid samples of V and ψ for plotting.
    Plotdata(PlotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    /// λ₀ z + (λ/2) x y
    Lq,
    /// ½(λ₂ y z + λ₃ z x) with ω₁ = ω₂
    Q1,
    /// ½(λ₁ x y + λ (y z + z x)) with ω₁ = ω₂
    Q2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FlavorArg {
    Real,
    Imaginary,
}

/// Oscillator, configuration and output flags shared by the job-driven subcommands.
#[derive(Debug, Clone, Args)]
pub struct SpecArgs {
    /// Number of dimensions (defaults to the number of frequencies).
    #[arg(long)]
    pub dim: Option<usize>,
    /// Comma-separated base frequencies; in the q1/q2 cases `ω,ω₃` is enough.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub omega: Vec<f64>,
    /// Linear coupling λ₀ as `real:<v>` or `imaginary:<v>` (1D, and the lq case in 3D).
    #[arg(long)]
    pub linear: Option<String>,
    /// Quadratic coupling λ (2D, lq and q2 in 3D).
    #[arg(long)]
    pub coupling: Option<String>,
    /// Three-dimensional perturbation.
    #[arg(long, value_enum)]
    pub case: Option<CaseArg>,
    /// Real in-plane coupling λ₁ (q2).
    #[arg(long, allow_negative_numbers = true)]
    pub lambda1: Option<f64>,
    /// Cross coupling λ₂ (q1).
    #[arg(long)]
    pub lambda2: Option<String>,
    /// Cross coupling λ₃ (q1).
    #[arg(long)]
    pub lambda3: Option<String>,
    /// Co-dimensions, one per axis; a single value applies to every axis.
    #[arg(long, value_delimiter = ',')]
    pub m: Vec<u32>,
    /// States as `;`-separated lists of per-axis entries (`g` or an excited index), e.g. `g;0;1,2`.
    #[arg(long)]
    pub states: Option<String>,
    /// Sample points per axis.
    #[arg(long)]
    pub points: Option<usize>,
    /// Box as `lo:hi` per axis, comma-separated, e.g. `-4:4,-3:3`.
    #[arg(long, allow_hyphen_values = true)]
    pub bounds: Option<String>,
    /// Output format (text, json or csv; not every subcommand offers all three).
    #[arg(long, value_enum)]
    pub format: Option<crate::job::Format>,
    /// Write the result here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Read the job from a JSON file; oscillator, configuration and grid flags are then ignored.
    #[arg(long)]
    pub job: Option<PathBuf>,
    /// Print the assembled JSON job instead of running it.
    #[arg(long)]
    pub emit_job: bool,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Largest relative energy to list.
    #[arg(long)]
    pub cutoff: Option<f64>,
    /// Integer or rational tilde-frequency ratios (e.g. `1,3`) for exact grouping.
    #[arg(long, value_delimiter = ',')]
    pub exact: Vec<String>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
}

#[derive(Debug, Args)]
pub struct DegeneracyArgs {
    /// 2 or 3.
    #[arg(long)]
    pub dim: usize,
    /// `ω₁,ω₂` in 2D, `ω,ω₃` in 3D.
    #[arg(long, value_delimiter = ',', required = true)]
    pub omega: Vec<f64>,
    /// Requested tilde-frequency ratio r̃ (2D) or ũ (3D), decimal or `p/q`.
    #[arg(long)]
    pub ratio: String,
    /// Required coupling flavor; a solution of the other flavor is an error.
    #[arg(long, value_enum)]
    pub flavor: Option<FlavorArg>,
    /// Three-dimensional case (q1 or q2).
    #[arg(long, value_enum)]
    pub case: Option<CaseArg>,
    /// Real in-plane coupling λ₁ (q2).
    #[arg(long, allow_negative_numbers = true)]
    pub lambda1: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<crate::job::Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
