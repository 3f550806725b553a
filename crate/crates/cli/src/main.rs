//! Experiment runner for the exact qubit-field dynamics library: time
//! evolutions, theta x t landscape sweeps, phase-space snapshots, and a
//! self-validation report, all emitted as deterministic CSV.
//!
//! Exit codes: 0 success; 2 configuration error; 3 physics-degenerate
//! input (the mapped state vanishes); 4 truncation guard; 5 validation
//! failure; 1 anything else.

mod config;
mod evolve;
mod output;
mod sweep;
mod validate;
mod wigner_cmd;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use susyjc::WignerConvention;

use config::RunConfig;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    pub fn context(mut self, ctx: &str) -> Self {
        self.message = format!("{ctx}: {}", self.message);
        self
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl From<susyjc::Error> for CliError {
    fn from(e: susyjc::Error) -> Self {
        use susyjc::Error::*;
        let code = match e {
            SusySinglet { .. } => 3,
            TruncationTooSmall { .. } | DisplacementSupport { .. } => 4,
            FockOutOfRange { .. } | DegenerateCat { .. } | ZeroQubitAmplitudes
            | MomentOrderTooLarge { .. } | NotResonant { .. } | InvalidParams { .. }
            | DimensionMismatch { .. } => 2,
            NotHermitian { .. } | FanoUndefined { .. } | InvalidDensity { .. } => 1,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self { code: 1, message: e.to_string() }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConventionArg {
    /// 1/pi prefactor; the vacuum integrates to 1/2.
    OverPi,
    /// 2/pi displaced-parity prefactor; the vacuum integrates to 1.
    Standard,
}

impl From<ConventionArg> for WignerConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::OverPi => WignerConvention::OverPi,
            ConventionArg::Standard => WignerConvention::Standard,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "susyjc",
    version,
    about = "Exact qubit-field dynamics runner: evolutions, sweeps, \
             phase-space snapshots, validation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Run-configuration file (flat `key = value` lines); defaults apply
    /// when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Directory for emitted CSV files (created if missing).
    #[arg(long, global = true, default_value = ".")]
    output: PathBuf,

    /// Worker threads for sweep cells (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Phase-space normalization convention.
    #[arg(long, global = true, value_enum, default_value_t = ConventionArg::OverPi)]
    convention: ConventionArg,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve one initial state and tabulate observables over time.
    Evolve,
    /// Theta x t landscape of inversion, moments, and Fano factor.
    Sweep,
    /// Phase-space snapshots of the reduced field state plus a manifest.
    Wigner,
    /// Self-check report: residuals, diagram, unitarity, spectrum, oracle.
    Validate,
}

fn run(cli: &Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::config("--threads must be positive"));
        }
        // A second build_global in the same process is harmless: the pool
        // is already running and the sweep still executes.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
            RunConfig::parse(&text)?
        }
        None => RunConfig::default(),
    };
    match cli.command {
        Command::Evolve => evolve::run(&cfg, &cli.output),
        Command::Sweep => sweep::run(&cfg, &cli.output),
        Command::Wigner => wigner_cmd::run(&cfg, &cli.output, cli.convention.into()),
        Command::Validate => validate::run(&cfg, &cli.output),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
