use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use harvestkit_cli::commands;
use harvestkit_cli::config::RunConfig;
use harvestkit_cli::fixtures_dir;

/// Entanglement harvested from a dispersive phonon vacuum by two pulsed
/// local detectors: point evaluations, negativity maps, optimization and
/// oracle validation.
#[derive(Parser)]
#[command(name = "harvestkit", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads for grid sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed of the optimizer restarts.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one parameter point; prints a JSON object.
    Point {
        #[arg(long)]
        config: PathBuf,
        /// Also write the JSON to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep the (gap, separation) grid into a CSV map.
    Map {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Maximize the harvested negativity over the configured bounds.
    Optimize {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the resolved SI and dimensionless parameters of a preset.
    Preset { name: String },
    /// Run the oracle and fixture suite; exits 4 on any failing check.
    Validate,
}

fn load_config(path: &PathBuf) -> Result<RunConfig, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    RunConfig::from_text(&text).map_err(|e| e.to_string())
}

fn run(cli: Cli) -> Result<u8, String> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| format!("thread pool: {e}"))?;
    }
    match &cli.command {
        Command::Point { config, out } => {
            let cfg = load_config(config)?;
            commands::cmd_point(&cfg, out.as_deref())
        }
        Command::Map { config, out } => {
            let cfg = load_config(config)?;
            commands::cmd_map(&cfg, out)
        }
        Command::Optimize { config, out } => {
            let cfg = load_config(config)?;
            commands::cmd_optimize(&cfg, out.as_deref(), cli.seed)
        }
        Command::Preset { name } => commands::cmd_preset(name),
        Command::Validate => commands::cmd_validate(&fixtures_dir()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
