//! `weierdim`: command-line front end for the Weierstrass-graph toolkit.

mod commands;
mod error;
mod parse;
mod report;
mod reproduce;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::error::{usage, CliError};
use crate::report::Format;

/// Environment variable capping the worker count.
const THREADS_VAR: &str = "WEIERDIM_THREADS";

#[derive(Debug, Parser)]
#[command(name = "weierdim", version, about = "Dimension of Weierstrass-type graphs")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value = "json")]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate f, Y, ∂ₓY, ∂_γY or S at one point.
    Eval(commands::EvalArgs),
    /// Bracket λ_b and bound λ̃_b for a range of bases.
    Thresholds(commands::ThresholdArgs),
    /// Verify or search for (*)-certificates.
    StarVerify(commands::StarArgs),
    /// Empirical transversality constant δ̂ and tangency counts.
    Transversality(commands::TransversalityArgs),
    /// Box-counting dimension of the graph.
    Boxdim(commands::BoxdimArgs),
    /// Sample transversal, SBR or graph-lift measures.
    Measure(commands::MeasureArgs),
    /// Check every published numeric claim; exit 1 if any fails.
    Reproduce(reproduce::ReproduceArgs),
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| usage(format!("{THREADS_VAR} must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Output(e.to_string()))
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    configure_threads()?;
    let (report, ok) = match &cli.command {
        Command::Eval(a) => (commands::eval(a)?, true),
        Command::Thresholds(a) => (commands::thresholds(a)?, true),
        Command::StarVerify(a) => (commands::star_verify(a)?, true),
        Command::Transversality(a) => (commands::transversality(a)?, true),
        Command::Boxdim(a) => (commands::boxdim(a)?, true),
        Command::Measure(a) => (commands::measure(a)?, true),
        Command::Reproduce(a) => reproduce::reproduce(a)?,
    };
    let text = report.render(cli.format)?;
    match &cli.output {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    if !ok {
        if let Some(t) = &report.table {
            for row in t.rows.iter().filter(|r| r.last() == Some(&serde_json::Value::Bool(false))) {
                eprintln!("claim failed: {}", row[0].as_str().unwrap_or_default());
            }
        }
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
