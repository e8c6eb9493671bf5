//! Command-line front end for the `tripartite` model library.
//!
//! Each subcommand reads a `v1` TOML config, writes one CSV table and, when
//! `--out` is given, a JSON sidecar `<out>.json` holding the run manifest and
//! derived results (peaks, dips, verification summary).

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tripartite::{GridSpec, Mutation};

pub mod commands;
pub mod config;
pub mod manifest;

pub use config::ConfigFile;
pub use manifest::RunManifest;

/// Failure classes, each with its own exit status.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Closed form disagrees with the oracle beyond tolerance (exit 1).
    Verification(String),
    /// Unreadable, malformed or physically invalid input (exit 2).
    Config(String),
    /// Singular response or linear system (exit 3).
    Numerical(String),
    /// Output could not be written (exit 2).
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<tripartite::Error> for CliError {
    fn from(e: tripartite::Error) -> Self {
        if e.is_singular() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Config(e.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "tripartite", version, about = "Spectra and single-photon transport of a qubit-coupled resonator/beam system")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cavity voltage-fluctuation spectrum (effective model), normalized by ω_c.
    Spectrum(SpectrumArgs),
    /// Reflection, transmission, phase and group delay, normalized by ω_m.
    Transport(TransportArgs),
    /// One row of summary observables per value of a swept parameter.
    Sweep(SweepArgs),
    /// Compare closed forms with the brute-force oracles.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Effective,
    Full,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Effective => "effective",
            Model::Full => "full",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Frequency grid `MIN:MAX:POINTS` in units of the normalization frequency.
    #[arg(long, value_parser = parse_grid, default_value = "0.95:1.05:4001", allow_hyphen_values = true)]
    pub grid: GridSpec,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// CSV destination; the sidecar goes to `<out>.json`. Stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    /// Also run the oracle checks on this config plus N random configs.
    #[arg(long)]
    pub verify_samples: Option<usize>,
    /// Seed for the random configs.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Corrupt a closed form on purpose (test hook).
    #[arg(long, hide = true, value_parser = parse_mutation)]
    pub inject_fault: Option<Mutation>,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Only `effective` is defined for spectra.
    #[arg(long, value_enum, default_value = "effective")]
    pub model: Model,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub check: CheckArgs,
}

#[derive(Debug, Clone, Args)]
pub struct TransportArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, value_enum, default_value = "effective")]
    pub model: Model,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub check: CheckArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepVariable {
    /// Beam-qubit coupling in units of ω_m.
    #[value(name = "g_m")]
    GM,
    /// Magnetic field in tesla; needs a [device] table.
    #[value(name = "B")]
    B,
    /// Qubit inversion ⟨σ_z⟩; full model only.
    #[value(name = "sigma_z")]
    SigmaZ,
}

impl SweepVariable {
    pub fn column(self) -> &'static str {
        match self {
            SweepVariable::GM => "g_m_ratio",
            SweepVariable::B => "B",
            SweepVariable::SigmaZ => "sigma_z",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Observable {
    /// Spectrum peaks and their splitting (effective model).
    Splitting,
    /// Reflection dips.
    Dips,
    /// Phase, reflectance and group delay at `--at`.
    Phase,
}

/// `START:STOP:N`, inclusive, `N >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SweepRange {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl SweepRange {
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let n = self.steps - 1;
        (0..self.steps)
            .map(|k| match k {
                0 => self.start,
                k if k == n => self.stop,
                k => self.start + (self.stop - self.start) * k as f64 / n as f64,
            })
            .collect()
    }
}

impl FromStr for SweepRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts.as_slice() else {
            return Err(format!("expected START:STOP:N, got `{s}`"));
        };
        let start: f64 = a.trim().parse().map_err(|e| format!("bad start `{a}`: {e}"))?;
        let stop: f64 = b.trim().parse().map_err(|e| format!("bad stop `{b}`: {e}"))?;
        let steps: usize = n.trim().parse().map_err(|e| format!("bad count `{n}`: {e}"))?;
        if !start.is_finite() || !stop.is_finite() {
            return Err("range ends must be finite".into());
        }
        if steps == 0 {
            return Err("range needs at least one value".into());
        }
        if steps > 1 && start == stop {
            return Err("range with several values needs START != STOP".into());
        }
        Ok(Self { start, stop, steps })
    }
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, value_enum)]
    pub var: SweepVariable,
    /// Swept values `START:STOP:N`.
    #[arg(long, allow_hyphen_values = true)]
    pub range: SweepRange,
    #[arg(long, value_enum)]
    pub observable: Observable,
    /// Probe frequency for `--observable phase`, in units of ω_m.
    #[arg(long, allow_hyphen_values = true)]
    pub at: Option<f64>,
    #[arg(long, value_enum, default_value = "effective")]
    pub model: Model,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Config to check in addition to the random ones.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Number of random configs.
    #[arg(long, default_value_t = 200)]
    pub verify_samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Probe frequencies per random config.
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    /// Grid for the given config, in units of ω_m.
    #[arg(long, value_parser = parse_grid, default_value = "0.95:1.05:10000")]
    pub grid: GridSpec,
    /// Write the full report as JSON here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, hide = true, value_parser = parse_mutation)]
    pub inject_fault: Option<Mutation>,
}

/// Parses `MIN:MAX:POINTS`.
pub fn parse_grid(s: &str) -> Result<GridSpec, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts.as_slice() else {
        return Err(format!("expected MIN:MAX:POINTS, got `{s}`"));
    };
    let min: f64 = a.trim().parse().map_err(|e| format!("bad MIN `{a}`: {e}"))?;
    let max: f64 = b.trim().parse().map_err(|e| format!("bad MAX `{b}`: {e}"))?;
    let points: usize = n.trim().parse().map_err(|e| format!("bad POINTS `{n}`: {e}"))?;
    GridSpec::new(min, max, points).map_err(|e| e.to_string())
}

fn parse_mutation(s: &str) -> Result<Mutation, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|e| e.to_string())
}

/// Runs a parsed command line.
pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Spectrum(a) => commands::spectrum(&a),
        Command::Transport(a) => commands::transport(&a),
        Command::Sweep(a) => commands::sweep(&a),
        Command::Verify(a) => commands::verify(&a),
    }
}
