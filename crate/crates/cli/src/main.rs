//! `mftransfer`: meshes, datasets, surrogate fits and transfer runs from the
//! command line.
//!
//! Exit codes: 0 on success, 2 for usage or validation errors, 1 for runtime
//! and numerical failures.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgMatches, CommandFactory, FromArgMatches, Parser, Subcommand};

use commands::{dataset, eval, fit, mesh, transfer};
use error::CliError;
use output::Context;

#[derive(Parser, Debug)]
#[command(name = "mftransfer", version, about = "Mesh-to-mesh field transfer with meshfree surrogates")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Directory receiving outputs; relative output names resolve against it.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,

    /// `key=value` file supplying defaults for any flag; explicit flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate, derive or inspect meshes.
    #[command(subcommand)]
    Mesh(mesh::MeshCommand),
    /// Sample fields into datasets and enrich them with quadrature points.
    #[command(subcommand)]
    Dataset(dataset::DatasetCommand),
    /// Fit a surrogate model to a dataset.
    #[command(subcommand)]
    Fit(fit::FitCommand),
    /// Evaluate a saved surrogate at target points.
    Eval(eval::EvalArgs),
    /// Piecewise-linear baseline on nodal fields.
    #[command(subcommand)]
    Baseline(eval::BaselineCommand),
    /// Run the alternating transfer between two meshes.
    Transfer(transfer::TransferArgs),
}

fn run(argv: Vec<String>) -> Result<(), CliError> {
    let argv = config::splice(argv)?;
    let matches = match Cli::command().try_get_matches_from(&argv) {
        Ok(m) => m,
        Err(e) => {
            let code = e.exit_code();
            e.print().ok();
            return Err(CliError::Exit(code));
        }
    };
    let cli = Cli::from_arg_matches(&matches).map_err(|e| CliError::Usage(e.to_string()))?;
    let (path, leaf) = leaf_matches(&matches);
    let ctx = Context::new(cli.out_dir.clone(), cli.seed, path, leaf)?;
    match cli.command {
        Command::Mesh(c) => mesh::run(c, &ctx),
        Command::Dataset(c) => dataset::run(c, &ctx),
        Command::Fit(c) => fit::run(c, &ctx),
        Command::Eval(a) => eval::run_eval(a, &ctx),
        Command::Baseline(c) => eval::run_baseline(c, &ctx),
        Command::Transfer(a) => transfer::run(a, &ctx),
    }
}

/// Subcommand names down to the innermost matches.
fn leaf_matches(m: &ArgMatches) -> (Vec<String>, &ArgMatches) {
    let mut path = Vec::new();
    let mut cur = m;
    while let Some((name, sub)) = cur.subcommand() {
        path.push(name.to_string());
        cur = sub;
    }
    (path, cur)
}

fn main() -> ExitCode {
    match run(std::env::args().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Exit(code)) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
