//! Experiments on partially-connected networks.
//!
//! Exit codes: 0 when every requested check passes (or the run is purely
//! informational), 1 when a check fails, 2 for invalid arguments or input
//! files, 3 for I/O failures.

mod commands;
mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use partial_paths::forwarding::SlotConvention;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("check failed: {0}")]
    CheckFailed(String),
    #[error("{0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::CheckFailed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<partial_paths::Error> for CliError {
    fn from(e: partial_paths::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "partial-paths", version, about = "Connectivity, forwarding and hop-distance experiments")]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Master seed; every random draw derives from it.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory for CSV and report files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (defaults to one per core).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Slot convention: tr-a, bare or detect.
    #[arg(long, global = true)]
    preset: Option<String>,
    /// TOML experiment file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Connectivity, reachability and path length across expected degrees.
    PhaseSweep(commands::sweep::SweepArgs),
    /// Mean delivery times for the non-monotone alternate-route families.
    Counterexample(commands::counterexample::CounterexampleArgs),
    /// Source versus intermediate forwarding, exact and simulated.
    Dominance(commands::dominance::DominanceArgs),
    /// Hop count versus distance study on a disk.
    Hopdist(commands::hopdist::HopdistArgs),
}

/// Settings shared by every subcommand after merging flags and file.
pub struct Context {
    pub seed: u64,
    /// Seed given by flag or experiment file, overriding seeds stored in
    /// input files.
    pub seed_override: Option<u64>,
    pub out: Option<PathBuf>,
    pub preset: Option<SlotConvention>,
    pub file: config::FileConfig,
}

pub const DEFAULT_SEED: u64 = 1;

impl Context {
    /// Writes `contents` to `name` inside the output directory, if one is set.
    pub fn write(&self, name: &str, contents: &str) -> Result<Option<PathBuf>, CliError> {
        let Some(dir) = &self.out else {
            return Ok(None);
        };
        write_file(dir, name, contents).map(Some)
    }
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", dir.display()));
    std::fs::create_dir_all(dir).map_err(io)?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(path)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = config::load(cli.common.config.as_deref())?;
    if let Some(n) = cli.common.threads.or(file.threads) {
        if n == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let preset = cli
        .common
        .preset
        .clone()
        .or_else(|| file.preset.clone())
        .map(|p| p.parse::<SlotConvention>())
        .transpose()?;
    let seed_override = cli.common.seed.or(file.seed);
    let ctx = Context {
        seed: seed_override.unwrap_or(DEFAULT_SEED),
        seed_override,
        out: cli.common.out.clone().or_else(|| file.out.clone()),
        preset,
        file,
    };
    match cli.command {
        Command::PhaseSweep(a) => commands::sweep::run(&ctx, a),
        Command::Counterexample(a) => commands::counterexample::run(&ctx, a),
        Command::Dominance(a) => commands::dominance::run(&ctx, a),
        Command::Hopdist(a) => commands::hopdist::run(&ctx, a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("partial-paths: {e}");
            ExitCode::from(e.code())
        }
    }
}
