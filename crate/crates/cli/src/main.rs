mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use laneq_core::Error;

#[derive(Parser, Debug)]
#[command(name = "laneq", version, about = "Quantum-circuit multi-modal trajectory forecaster")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Flat `key = value` config file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Overrides the `seed` key.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory (created if missing).
    #[arg(long, global = true, default_value = "laneq-out")]
    pub out: PathBuf,
    /// Worker threads for evaluation and prediction; 0 uses all cores.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Config override `KEY=VALUE`, applied after the config file. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub sets: Vec<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write seeded synthetic scenarios as JSONL.
    Generate {
        /// Number of scenarios (defaults to the `synth_count` key).
        #[arg(long)]
        count: Option<usize>,
        /// Output file (defaults to `<out>/scenarios.jsonl`).
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Train with SPSA, writing per-epoch checkpoints, `best.ckpt` and `train_log.csv`.
    Train,
    /// Evaluate a checkpoint and write `eval_report.json`.
    Evaluate {
        #[arg(long)]
        checkpoint: PathBuf,
        /// Which scenarios to score.
        #[arg(long, value_enum, default_value_t = Split::Val)]
        split: Split,
        /// Score this JSONL file instead of a split of the configured data.
        #[arg(long)]
        scenarios: Option<PathBuf>,
        /// Also write `per_scenario.csv`.
        #[arg(long)]
        per_scenario: bool,
    },
    /// Write ranked modes in lane and world coordinates to `predictions.jsonl`.
    Predict {
        #[arg(long)]
        checkpoint: PathBuf,
        #[arg(long)]
        scenarios: PathBuf,
    },
    /// Convert a training log and evaluation reports into tidy CSV tables.
    ExportPlots {
        #[arg(long)]
        log: Option<PathBuf>,
        /// `LABEL=PATH` of an `eval_report.json`. Repeatable.
        #[arg(long = "report", value_name = "LABEL=PATH")]
        reports: Vec<String>,
    },
}

#[derive(clap::ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Split {
    Train,
    Val,
    All,
}

/// Process exit status for an error.
fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidArgument(_) => 1,
        Error::Numerical(_) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("laneq: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
