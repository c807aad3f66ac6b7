//! `sslrank`: semi-supervised feature ranking from the command line.
//!
//! Exit status: 0 on success, 1 for usage or configuration errors, 2 for
//! data errors, 3 for numeric degeneracies (and, with `--strict`, for
//! degeneracy warnings).

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::RunConfig;
use error::{CliError, DEGENERATE, USAGE};

#[derive(Parser)]
#[command(name = "sslrank", version, about = "Semi-supervised feature ranking")]
struct Cli {
    /// Worker threads; defaults to the number of cores
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Treat numeric degeneracy warnings as failures (exit status 3)
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Run {
    /// JSON file with run settings; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    flags: RunConfig,
}

#[derive(Subcommand)]
enum Command {
    /// Rank the features of a dataset
    Rank(Run),
    /// Label-masked cross-validation of a ranking method against its supervised counterpart
    Xval(Run),
    /// Estimate how well the data satisfy the clustering hypothesis
    Ch(Run),
    /// Score an existing ranking with importance-weighted kNN
    Evaluate(Run),
}

fn run(cli: Cli) -> Result<Vec<String>, CliError> {
    if let Some(n) = cli.jobs {
        if n == 0 {
            return Err(CliError::usage("--jobs must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::usage(format!("cannot start worker pool: {e}")))?;
    }
    let (handler, args): (fn(&RunConfig) -> Result<commands::Warnings, CliError>, Run) = match cli.command {
        Command::Rank(a) => (commands::rank_cmd, a),
        Command::Xval(a) => (commands::xval_cmd, a),
        Command::Ch(a) => (commands::ch_cmd, a),
        Command::Evaluate(a) => (commands::evaluate_cmd, a),
    };
    let base = match &args.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    handler(&base.overridden_by(args.flags))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE as u8 } else { 0 });
        }
    };
    let strict = cli.strict;
    match run(cli) {
        Ok(warnings) => {
            for w in &warnings {
                eprintln!("warning: {w}");
            }
            if strict && !warnings.is_empty() {
                ExitCode::from(DEGENERATE as u8)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
