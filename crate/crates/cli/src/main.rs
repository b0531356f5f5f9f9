//! `authlm`: preprocessing, training, evaluation and attribution experiments.

mod commands;
mod config;
mod layout;
mod status;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{Method, Overrides, RunConfig};
use status::{ConfigError, EXIT_CONFIG, EXIT_PARTIAL};

#[derive(Parser)]
#[command(name = "authlm", version, about = "Authorship attribution with per-author language models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Subcommand)]
enum Command {
    /// Tokenize, stem, prune and encode every author file
    Preprocess,
    /// Train one neural model per (author, seed)
    TrainNnlm,
    /// Train one Kneser-Ney n-gram model per (author, seed)
    TrainNgram,
    /// Test-set perplexity per (method, author, seed)
    Eval,
    /// Accuracy vs. test length sweep and confusion matrices
    Experiment,
    /// Generate a synthetic multi-author corpus
    Synth,
    /// Print the eval and experiment summaries
    Report,
    /// Print the resolved configuration as TOML
    ShowConfig,
}

fn run(cli: &Cli) -> anyhow::Result<ExitCode> {
    let cfg = RunConfig::resolve(&cli.overrides)?;
    let status = match cli.command {
        Command::Preprocess => commands::preprocess::run(&cfg)?,
        Command::TrainNnlm => commands::train::run(&cfg, Method::Nnlm)?,
        Command::TrainNgram => commands::train::run(&cfg, Method::Kn)?,
        Command::Eval => commands::eval::run(&cfg)?,
        Command::Experiment => commands::experiment::run(&cfg)?,
        Command::Synth => commands::synth::run(&cfg)?,
        Command::Report => commands::report::run(&cfg)?,
        Command::ShowConfig => {
            cfg.validate().map_err(status::config_err)?;
            print!("{}", toml::to_string(&cfg)?);
            status::RunStatus::default()
        }
    };
    if !status.failures.is_empty() {
        eprintln!("{} item(s) failed", status.failures.len());
    }
    Ok(status.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<ConfigError>() {
                ExitCode::from(EXIT_CONFIG)
            } else {
                ExitCode::from(EXIT_PARTIAL)
            }
        }
    }
}
