//! `bioqa` — operator entry point for the ensemble QA pipeline.
//!
//! Typical flow: `ingest` the corpus, `retrieve` documents and snippets,
//! `populate-cache` against the model roster, `sweep` subsets per
//! question type, then `answer` and `eval` with the winning subset.
//!
//! Exit codes: 0 success, 1 incomplete data (cache gaps, transport
//! failures), 2 bad invocation or unreadable paths.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use bioqa_core::Error;

use config::RunConfig;

#[derive(Parser)]
#[command(
    name = "bioqa",
    version,
    about = "Ensemble biomedical question answering"
)]
struct Cli {
    /// Run configuration file (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Question type: yesno, factoid, list, or summary.
    #[arg(long, global = true)]
    qtype: Option<String>,

    /// Context strategy override: snippets, abstracts, abstracts_extended.
    #[arg(long, global = true)]
    strategy: Option<String>,

    /// List-dedup cosine threshold override (enables dedup).
    #[arg(long, global = true)]
    threshold: Option<f64>,

    /// Model subset: comma-separated member names or a hex mask (0x..).
    #[arg(long, global = true)]
    subset: Option<String>,

    /// Keep only these round ids (comma-separated).
    #[arg(long, global = true)]
    rounds: Option<String>,

    /// Output path override (file or directory, per command).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build and persist the inverted index from the corpus.
    Ingest,
    /// Retrieve candidates and re-rank by snippet; write Phase-A JSON.
    Retrieve {
        /// Candidate pool size before snippet re-ranking.
        #[arg(long, default_value_t = 50)]
        k: usize,
    },
    /// Query every roster member for every question, caching predictions.
    PopulateCache,
    /// Evaluate every model subset for one question type.
    Sweep,
    /// Emit Phase-B answers for a chosen subset.
    Answer,
    /// Score a subset's answers against the gold set.
    Eval,
}

fn exit_code_for(error: &Error) -> u8 {
    match error {
        Error::Io { .. }
        | Error::Parse { .. }
        | Error::Validation(_)
        | Error::EmptyContext { .. }
        | Error::NoSnippet { .. } => 2,
        Error::Transport { .. }
        | Error::Protocol { .. }
        | Error::Script { .. }
        | Error::Staleness { .. }
        | Error::Embedding(_) => 1,
    }
}

fn run(cli: &Cli) -> Result<i32, Error> {
    let config_path = cli
        .config
        .as_ref()
        .ok_or_else(|| Error::Validation("--config is required".into()))?;
    let mut config = RunConfig::load(config_path)?;

    if let Some(strategy) = &cli.strategy {
        config.strategy = strategy.clone();
    }
    if let Some(threshold) = cli.threshold {
        config.dedup.list = Some(bioqa_core::DedupConfig {
            enabled: true,
            threshold,
        });
    }
    if let Some(rounds) = &cli.rounds {
        config.rounds_filter = Some(rounds.clone());
    }

    match &cli.command {
        Command::Ingest => commands::cmd_ingest(&config),
        Command::Retrieve { k } => commands::cmd_retrieve(&config, *k, cli.out.clone()),
        Command::PopulateCache => commands::cmd_populate(&config),
        Command::Sweep => {
            let qtype = cli
                .qtype
                .as_deref()
                .ok_or_else(|| Error::Validation("sweep requires --qtype".into()))?;
            commands::cmd_sweep(&config, qtype, cli.out.clone())
        }
        Command::Answer => {
            let subset = cli
                .subset
                .as_deref()
                .ok_or_else(|| Error::Validation("answer requires --subset".into()))?;
            commands::cmd_answer(&config, subset, cli.out.clone())
        }
        Command::Eval => commands::cmd_eval(&config, cli.subset.as_deref(), cli.qtype.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(exit_code_for(&error))
        }
    }
}
