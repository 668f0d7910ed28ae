use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "exactwell",
    version,
    about = "Bound states of exactly solvable 1D quantum wells"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum Command {
    /// Lowest bound states at one depth.
    Solve(SolveArgs),
    /// Levels over a range of depths.
    Sweep(SweepArgs),
    /// Normalized eigenfunction of one state.
    Wavefunction(WavefunctionArgs),
    /// Compare analytic levels with the finite-difference oracle.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct WellArgs {
    /// Well class: 0 steep, 1 double, 2 shallow.
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..=2))]
    pub class: u8,
    /// Extra Coulomb-like strength u1 of the term u1 (|x|/d)^q / (1 + |x|/d).
    #[arg(long, requires = "q", value_parser = non_negative)]
    pub u1: Option<f64>,
    /// Power q (0 or 1) of the extra term.
    #[arg(long, requires = "u1", value_parser = clap::value_parser!(u8).range(0..=1))]
    pub q: Option<u8>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutputArgs {
    /// Write to this path (atomically) instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Add a generation timestamp to the record.
    #[arg(long)]
    pub stamp: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct UnitArgs {
    /// Particle mass in electron masses; with --width, adds energies in meV.
    #[arg(long, requires = "width", value_parser = positive)]
    pub mass: Option<f64>,
    /// Well width d in nm.
    #[arg(long, requires = "mass", value_parser = positive)]
    pub width: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SolveArgs {
    #[command(flatten)]
    pub well: WellArgs,
    /// Dimensionless depth u = U0 d^2 (units hbar^2/2m).
    #[arg(long, value_parser = positive)]
    pub depth: f64,
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..=64))]
    pub states: u32,
    /// Smallest decay constant kappa d scanned.
    #[arg(long, default_value_t = 1e-6, value_parser = positive)]
    pub kappa_min: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(flatten)]
    pub units: UnitArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepArgs {
    /// Well class: 0 steep, 1 double, 2 shallow.
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..=2))]
    pub class: u8,
    #[arg(long, value_parser = positive)]
    pub depth_min: f64,
    #[arg(long, value_parser = positive)]
    pub depth_max: f64,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=100_000))]
    pub steps: u32,
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..=64))]
    pub states: u32,
    /// Space depths logarithmically.
    #[arg(long)]
    pub log: bool,
    #[arg(long, default_value_t = 1e-6, value_parser = positive)]
    pub kappa_min: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct WavefunctionArgs {
    #[command(flatten)]
    pub well: WellArgs,
    #[arg(long, value_parser = positive)]
    pub depth: f64,
    /// State index, 0 for the ground state.
    #[arg(long)]
    pub state: u32,
    /// Grid extent in units of d; defaults to 40 / kappa d.
    #[arg(long, value_parser = positive)]
    pub xmax: Option<f64>,
    /// Samples per half-axis, including x = 0.
    #[arg(long, default_value_t = 4001, value_parser = clap::value_parser!(u32).range(5..=10_000_000))]
    pub samples: u32,
    /// Also emit psi^2.
    #[arg(long)]
    pub density: bool,
    #[arg(long, default_value_t = 1e-6, value_parser = positive)]
    pub kappa_min: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub well: WellArgs,
    #[arg(long, value_parser = positive)]
    pub depth: f64,
    /// Interior finite-difference points (odd).
    #[arg(long, default_value_t = 24001)]
    pub grid: u32,
    /// Domain half-width L in units of d; defaults to 60 (200 for class 0).
    #[arg(long, value_parser = positive)]
    pub halfwidth: Option<f64>,
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..=64))]
    pub states: u32,
    /// Relative tolerance on kappa d after extrapolation.
    #[arg(long, default_value_t = 1e-3, value_parser = positive)]
    pub tolerance: f64,
    #[arg(long, default_value_t = 1e-6, value_parser = positive)]
    pub kappa_min: f64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("must be positive and finite, got {s}"))
    }
}

fn non_negative(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v >= 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("must be non-negative and finite, got {s}"))
    }
}
