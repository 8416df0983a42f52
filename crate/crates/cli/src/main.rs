//! `resonorm`: normal forms, bifurcation diagrams and level sets of
//! area-preserving maps near `n:1` resonances.

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{Flags, RunConfig};
use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "resonorm", version, about = "Simplified normal forms and bifurcations near n:1 resonances")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reduce a series file to its simplified normal form
    Normalize(NormalizeArgs),
    /// Boundary curves, domain grid and diagram of a model family
    Bifurcate,
    /// Level sets of a model Hamiltonian or of a rescaled limit model
    Levels(LevelsArgs),
    /// Run verification suites
    Verify,
}

#[derive(Args, Debug)]
struct NormalizeArgs {
    /// Series JSON file
    input: Option<PathBuf>,
    /// `standard`, or `alt-n6` for the shape without the h33 hypothesis
    #[arg(long)]
    variant: Option<String>,
    /// The input is a map relative to the rotation rather than a Hamiltonian
    #[arg(long)]
    map: bool,
}

#[derive(Args, Debug)]
struct LevelsArgs {
    /// Trace only the critical level sets
    #[arg(long)]
    critical: bool,
    /// Also trace levels just above and below each critical level
    #[arg(long)]
    neighbors: bool,
    /// Draw a limit model instead: outer, cubic or n6
    #[arg(long, value_name = "SCALING")]
    scaled: Option<String>,
    /// Explicit levels, comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    levels: Option<Vec<f64>>,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = match &cli.flags.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let mut cfg = file.merge(&cli.flags);
    match &cli.command {
        Command::Normalize(a) => {
            cfg.input = a.input.clone().or(cfg.input);
            cfg.variant = a.variant.clone().or(cfg.variant);
            cfg.map = Some(a.map || cfg.map.unwrap_or(false));
        }
        Command::Levels(a) => {
            cfg.critical = Some(a.critical || cfg.critical.unwrap_or(false));
            cfg.neighbors = Some(a.neighbors || cfg.neighbors.unwrap_or(false));
            cfg.scaled = a.scaled.clone().or(cfg.scaled);
            cfg.levels = a.levels.clone().or(cfg.levels);
        }
        Command::Bifurcate | Command::Verify => {}
    }

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = cfg.jobs {
        if jobs == 0 {
            return Err(CliError::Input("--jobs must be at least 1".into()));
        }
        pool = pool.num_threads(jobs);
    }
    let pool = pool.build().map_err(|e| CliError::Input(format!("cannot start {e}")))?;

    pool.install(|| match cli.command {
        Command::Normalize(_) => commands::normalize(&cfg),
        Command::Bifurcate => commands::bifurcate(&cfg),
        Command::Levels(_) => commands::levels(&cfg),
        Command::Verify => commands::verify(&cfg),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.render().to_string();
            let first = text.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            eprintln!("{}", CliError::Input(first.to_string()).report());
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.report());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
