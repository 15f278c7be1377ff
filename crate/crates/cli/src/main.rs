//! `robustmr analyze` runs the estimators on a summarized-data CSV;
//! `robustmr simulate` runs a simulation scenario and writes its report.
//!
//! Exit codes: 0 success, 2 bad input or flags, 3 estimator failure.

mod analyze;
mod simulate;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use robustmr::{EffectsModel, Error, Method};

#[derive(Parser)]
#[command(name = "robustmr", version, about = "Robust Mendelian randomization with summarized data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the causal effect from per-variant associations.
    Analyze(analyze::AnalyzeArgs),
    /// Run a simulation scenario and report method performance.
    Simulate(simulate::SimulateArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Effects {
    Fixed,
    Random,
}

impl From<Effects> for EffectsModel {
    fn from(e: Effects) -> Self {
        match e {
            Effects::Fixed => EffectsModel::Fixed,
            Effects::Random => EffectsModel::MultiplicativeRandom,
        }
    }
}

/// Failure with the exit code it maps to.
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. }
            | Error::Empty
            | Error::DuplicateId(_)
            | Error::InvalidVariant { .. }
            | Error::InvalidScenario(_)
            | Error::Io(_) => 2,
            _ => 3,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

/// Parses a comma-separated method list (`all` selects every method) and
/// adds robust and/or penalized counterparts on request. The result follows
/// the canonical method order.
pub fn select_methods(list: Option<&[String]>, robust: bool, penalize: bool) -> Result<Vec<Method>, Failure> {
    let mut chosen: Vec<Method> = match list {
        None => Method::ALL.to_vec(),
        Some(items) => {
            let mut out = Vec::new();
            for item in items.iter().map(|s| s.trim()).filter(|s| !s.is_empty()) {
                if item == "all" {
                    out.extend(Method::ALL);
                } else {
                    out.push(item.parse::<Method>().map_err(|e| Failure::usage(e.to_string()))?);
                }
            }
            out
        }
    };
    if robust {
        let extra: Vec<Method> = chosen.iter().filter_map(|m| m.robust()).collect();
        chosen.extend(extra);
    }
    if penalize {
        let extra: Vec<Method> = chosen.iter().filter_map(|m| m.penalized()).collect();
        chosen.extend(extra);
    }
    let selected: Vec<Method> = Method::ALL.into_iter().filter(|m| chosen.contains(m)).collect();
    if selected.is_empty() {
        return Err(Failure::usage("no methods selected"));
    }
    Ok(selected)
}

/// The given seed, or a fresh one announced on stderr.
pub fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let nanos = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_nanos() as u64)
            .unwrap_or(0);
        let seed = robustmr::rng::mix64(nanos ^ (std::process::id() as u64) << 32);
        eprintln!("seed: {seed}");
        seed
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(args) => analyze::run(args),
        Command::Simulate(args) => simulate::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
