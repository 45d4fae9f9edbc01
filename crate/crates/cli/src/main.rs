//! `cvgauss`: command-line front end for the Gaussian simulator.
//!
//! Exit codes: 0 success, 1 computational failure, 2 usage or parse error.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use output::Failure;

#[derive(Debug, Parser)]
#[command(name = "cvgauss", version, about = "Gaussian continuous-variable quantum information simulator")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Seed for every random draw; recorded in the output.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Parameter sweep `name:lo:hi:steps`, emitted one row per point.
    #[arg(long, global = true)]
    pub sweep: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Covariance,
    Stabilizer,
    Both,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a circuit file on one or both backends.
    RunCircuit(RunCircuit),
    /// Coherent-state teleportation through a two-mode squeezed resource.
    Teleport(Teleport),
    /// Dense-coding capacity and break-even squeezing.
    Densecode(Densecode),
    /// Gaussian cloning: the duplicator circuit and optimal fidelities.
    Clone(CloneArgs),
    /// Entanglement swapping of two two-mode squeezed vacua.
    Swap(Swap),
    /// Squeezing needed for 1 -> M telecloning.
    Telecl(Telecl),
    /// All applicable entanglement criteria for a state file.
    Entanglement(Entanglement),
    /// Displaced-parity Bell combination for a two-mode squeezed vacuum.
    Nonlocal(Nonlocal),
    /// N-mode GHZ-type state from one p-squeezed and N-1 x-squeezed vacua.
    Ghz(Ghz),
}

#[derive(Debug, Args)]
pub struct RunCircuit {
    pub circuit: PathBuf,
    #[arg(long, value_enum, default_value_t = BackendArg::Covariance)]
    pub backend: BackendArg,
    /// Samples of the terminal measurements.
    #[arg(long, default_value_t = 0)]
    pub shots: usize,
}

#[derive(Debug, Args)]
pub struct Teleport {
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    #[arg(long, default_value_t = 1.0)]
    pub g: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub alpha_x: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub alpha_p: f64,
    /// Monte Carlo shots (0 for closed form only).
    #[arg(long, default_value_t = 0)]
    pub shots: usize,
    /// Monte Carlo path: Bell detection on covariances, the stabilizer
    /// circuit (unit gain only), or both.
    #[arg(long, value_enum, default_value_t = BackendArg::Covariance)]
    pub backend: BackendArg,
}

#[derive(Debug, Args)]
pub struct Densecode {
    #[arg(long, default_value_t = 1.884)]
    pub nbar: f64,
}

#[derive(Debug, Args)]
pub struct CloneArgs {
    #[arg(long = "N", default_value_t = 1)]
    pub n: u64,
    #[arg(long = "M", default_value_t = 2)]
    pub m: u64,
    /// Hilbert-space dimension for the universal fidelity (default: infinite).
    #[arg(long)]
    pub dim: Option<u64>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub alpha_x: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub alpha_p: f64,
}

#[derive(Debug, Args)]
pub struct Swap {
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    #[arg(long, default_value_t = 1.0)]
    pub r_prime: f64,
}

#[derive(Debug, Args)]
pub struct Telecl {
    #[arg(long = "M", default_value_t = 2)]
    pub m: u64,
}

#[derive(Debug, Args)]
pub struct Entanglement {
    /// State file `{n_modes, mean, cov}`, or any output carrying a `state`.
    pub state: PathBuf,
}

#[derive(Debug, Args)]
pub struct Nonlocal {
    #[arg(long, default_value_t = 3.0)]
    pub r: f64,
    /// Optimise all four displacement components instead of `α = β = i√J`.
    #[arg(long)]
    pub full: bool,
}

#[derive(Debug, Args)]
pub struct Ghz {
    #[arg(long = "N", default_value_t = 3)]
    pub n: usize,
    #[arg(long, default_value_t = 1.0)]
    pub r1: f64,
    #[arg(long, default_value_t = 1.0)]
    pub r2: f64,
}

fn run(cli: Cli) -> Result<(), Failure> {
    let c = &cli.common;
    let doc = match &cli.command {
        Command::RunCircuit(a) => commands::run_circuit(c, a)?,
        Command::Teleport(a) => commands::teleport(c, a)?,
        Command::Densecode(a) => commands::densecode(c, a)?,
        Command::Clone(a) => commands::clone(c, a)?,
        Command::Swap(a) => commands::swap(c, a)?,
        Command::Telecl(a) => commands::telecl(c, a)?,
        Command::Entanglement(a) => commands::entanglement(c, a)?,
        Command::Nonlocal(a) => commands::nonlocal(c, a)?,
        Command::Ghz(a) => commands::ghz(c, a)?,
    };
    output::emit(c, &doc)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("CVGAUSS_LOG", "warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
