use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::EXIT_CODES;

#[derive(Debug, Parser)]
#[command(
    name = "radial-gate",
    version,
    about = "Origin behaviour, delta anomalies and spectra of the radial Schrödinger equation",
    after_help = EXIT_CODES
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify both radial branches at the origin and the delta pattern of Q.
    Classify(ClassifyArgs),
    /// Measure delta anomalies by weak-form pairing against smooth probes.
    VerifyAnomaly(VerifyArgs),
    /// Closed-form levels and wavefunctions of the infinite circular well.
    Well(WellArgs),
    /// Levels and wavefunctions by shooting.
    Spectrum(SpectrumArgs),
    /// Norm, Green defect, kinetic divergence and delta coefficient of the Y0 pseudo-state.
    PseudoY0(PseudoArgs),
    /// x Y0(x)^2 sampled on (0, x2], x2 the second zero of Y0.
    Fig1(Fig1Args),
    /// Flux of grad ln(r + alpha) through the circle r = eps.
    Flux(FluxArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Case {
    /// C ln r, anomaly 2πC δ
    Log,
    /// r^{-1} e^{±iφ}
    M1,
    /// r^{-2} e^{±2iφ}
    M2,
    /// r^{-3} e^{±3iφ}
    M3,
    /// the acceptable branch r^{|m|} e^{imφ}, no anomaly
    Smooth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Form {
    /// R'' + (d-1)R'/r - cR/r² + κ(E-V)R = 0
    Radial,
    /// u = r^{(d-1)/2} R
    Reduced,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct UnitArgs {
    /// Reduced Planck constant.
    #[arg(long, default_value_t = 1.0)]
    pub hbar: f64,
    /// Particle mass.
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
}

#[derive(Debug, Args)]
pub struct ProblemArgs {
    /// Spatial dimension.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..=3))]
    pub dim: u32,
    /// Angular momentum m (2D).
    #[arg(long, allow_negative_numbers = true, conflicts_with = "l")]
    pub m: Option<i32>,
    /// Angular momentum l (3D).
    #[arg(long)]
    pub l: Option<u32>,
    /// zero | well:a=<r> | power:c=<c>,k=<k> | coulomb2d:Z=<z> | table:<path>
    #[arg(long, default_value = "zero")]
    pub potential: String,
    #[command(flatten)]
    pub units: UnitArgs,
}

#[derive(Debug, Args)]
pub struct QuadArgs {
    /// Excision radii, strictly decreasing (comma separated).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub eps_list: Option<Vec<f64>>,
    /// Width of the Gaussian probes.
    #[arg(long, default_value_t = 0.5)]
    pub sigma: f64,
    /// Angular quadrature nodes (default sized to the largest harmonic).
    #[arg(long)]
    pub angular_nodes: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub case: Case,
    /// Angular momentum: the sign for m1..m3 (both signs if absent), the
    /// harmonic for smooth.
    #[arg(long, allow_negative_numbers = true)]
    pub m: Option<i32>,
    /// Energy of the Frobenius series behind the power and smooth cases.
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub energy: f64,
    #[command(flatten)]
    pub quad: QuadArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct WellArgs {
    /// Well radius.
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub m: i32,
    #[arg(long, default_value_t = 3)]
    pub levels: u32,
    /// Wavefunction samples per level.
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    #[command(flatten)]
    pub units: UnitArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Outer radius (defaults to the wall of a well).
    #[arg(long)]
    pub r_max: Option<f64>,
    #[arg(long, default_value_t = 3)]
    pub levels: usize,
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = Form::Radial)]
    pub form: Form,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PseudoArgs {
    /// Well radius.
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    /// Which zero of Y0 sits on the wall.
    #[arg(long, default_value_t = 2)]
    pub n: u32,
    #[command(flatten)]
    pub quad: QuadArgs,
    #[command(flatten)]
    pub units: UnitArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct Fig1Args {
    #[arg(long, default_value_t = 500)]
    pub points: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct FluxArgs {
    #[arg(long, default_value_t = 1e-9)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}
