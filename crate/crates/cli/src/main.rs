use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod manifest;

#[derive(Debug, Parser)]
#[command(
    name = "he4film",
    version,
    about = "Surface waves on superfluid ⁴He films"
)]
pub struct Cli {
    /// JSON parameter file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Built-in parameter set; overrides `case` in the config file.
    #[arg(long, global = true, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub case: Option<u8>,
    /// Film thickness ζ₀ in Å.
    #[arg(long, global = true)]
    pub zeta0: Option<f64>,
    /// Output directory.
    #[arg(long, global = true, default_value = "he4film-out")]
    pub out: PathBuf,
    /// Significant digits in CSV output.
    #[arg(long, global = true, default_value_t = he4film::io::DEFAULT_PRECISION, value_parser = parse_precision)]
    pub precision: usize,
    /// Reserved. The dynamics are deterministic and nothing is drawn at random.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Physical and dimensionless coefficients, table coefficients and roton mass.
    Coefficients,
    /// Excitation-spectrum table Ẽ(k)/k_B.
    Dispersion(DispersionArgs),
    /// Build a traveling wave and check it against the traveling-wave equation.
    Solve(SolveArgs),
    /// Split-step run of the field equation.
    Simulate(SimulateArgs),
    /// Run the acceptance suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Args, serde::Serialize)]
pub struct DispersionArgs {
    /// Smallest k in Å⁻¹.
    #[arg(long, default_value_t = 0.0)]
    pub k_min: f64,
    /// Largest k in Å⁻¹.
    #[arg(long, default_value_t = he4film::dispersion::DEFAULT_TABLE_K_MAX)]
    pub k_max: f64,
    #[arg(long, default_value_t = he4film::dispersion::DEFAULT_TABLE_POINTS)]
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Quartic,
    Dark,
    Cosine,
    Elliptic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientSource {
    /// From c_s, Δ and k₀.
    Roton,
    /// From the `hydro` section of the config.
    Hydro,
}

#[derive(Debug, Args, serde::Serialize)]
pub struct SolveArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    /// Propagation direction.
    #[arg(long, value_enum, default_value_t = Direction::Plus)]
    pub direction: Direction,
    /// Index into the admissible roots Q, ascending.
    #[arg(long, default_value_t = 0)]
    pub root: usize,
    /// Elliptic modulus k.
    #[arg(long, default_value_t = 0.9)]
    pub modulus: f64,
    /// Cosine speed over its threshold speed, |v|/v₀.
    #[arg(long, default_value_t = 1.005)]
    pub v_ratio: f64,
    /// Use the negative cosine amplitude.
    #[arg(long)]
    pub negative_amplitude: bool,
    #[arg(long, value_enum, default_value_t = CoefficientSource::Roton)]
    pub coefficients: CoefficientSource,
    /// Samples in the profile CSV.
    #[arg(long, default_value_t = 1001)]
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Initial {
    Quartic,
    Dark,
    Cosine,
    File,
}

#[derive(Debug, Args, serde::Serialize)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value_t = Initial::Quartic)]
    pub initial: Initial,
    /// Checkpoint to start from with `--initial file`.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Grid points; ignored for `--initial file`.
    #[arg(long, default_value_t = he4film::scenario::DEFAULT_POINTS)]
    pub points: usize,
    #[arg(long, default_value_t = he4film::scenario::DEFAULT_STEPS)]
    pub steps: usize,
    /// Time step; defaults to the scenario's choice.
    #[arg(long)]
    pub dtau: Option<f64>,
    /// Steps between recorded outputs.
    #[arg(long)]
    pub stride: Option<usize>,
}

#[derive(Debug, Args, serde::Serialize)]
pub struct VerifyArgs {
    /// Run only these groups: dispersion, solutions, solver, elliptic.
    #[arg(long = "suite", value_parser = parse_group)]
    pub groups: Vec<he4film::suite::Group>,
    /// Scale a₂ in the exact-solution residual (negative control).
    #[arg(long, default_value_t = 1.0)]
    pub tamper_a2: f64,
}

fn parse_precision(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n @ 1..=17) => Ok(n),
        _ => Err(format!("precision must be an integer in 1..=17, got `{s}`")),
    }
}

fn parse_group(s: &str) -> Result<he4film::suite::Group, String> {
    he4film::suite::Group::parse(s).ok_or_else(|| format!("unknown suite `{s}`"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {:#}", e.source);
            e.exit_code()
        }
    }
}
