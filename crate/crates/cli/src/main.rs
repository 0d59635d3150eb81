//! `asphera`: exact homology of finite group actions from the command line.
//!
//! Exit codes: 0 success, 1 a reproduction check failed, 2 bad invocation
//! or rejected input, 3 a resource guard tripped, 4 internal error.

mod compute;
mod input;
mod report;
mod reproduce;

use std::fs;
use std::io::Write;
use std::panic;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use asphera_core::Limits;
use clap::{Parser, Subcommand};

use crate::compute::{Compute, Output};
use crate::report::Report;

const MAX_RANK_VAR: &str = "ASPHERA_MAX_RANK";

#[derive(Debug, Parser)]
#[command(
    name = "asphera",
    version,
    about = "Coset posets, group homology and Borel constructions for finite group actions"
)]
struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Record wall time in the report. Reports are otherwise byte-identical
    /// across runs.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rerun a worked example and compare with its expected values.
    Reproduce {
        /// One of zpq:<p>,<q>, dihedral:<n>, three-extensions, coset-wedge:<group>.
        id: String,
        /// Join levels for Borel steps.
        #[arg(long, default_value_t = 3)]
        levels: usize,
    },
    /// Run a single computation.
    #[command(subcommand)]
    Compute(Compute),
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(asphera_core::Error),
    Io(std::io::Error),
}

impl From<asphera_core::Error> for CliError {
    fn from(e: asphera_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) if e.is_scale_exceeded() => 3,
            CliError::Core(e) if e.is_internal() => 4,
            CliError::Core(_) => 2,
            CliError::Io(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

fn limits() -> Result<Limits, CliError> {
    match std::env::var(MAX_RANK_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Limits::with_max_rank)
            .map_err(|_| CliError::Usage(format!("{MAX_RANK_VAR} must be a positive integer, got `{v}`"))),
        Err(_) => Ok(Limits::default()),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(CliError::Io),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(CliError::Io),
    }
}

/// Returns whether every reproduction check passed.
fn run(cli: &Cli) -> Result<bool, CliError> {
    let limits = limits()?;
    let start = Instant::now();
    let argv: Vec<String> = std::env::args().skip(1).filter(|a| a != "--timing").collect();
    let (inputs, outputs, pass) = match &cli.command {
        Command::Reproduce { id, levels } => {
            if *levels < 2 {
                return Err(CliError::Usage("--levels must be at least 2".into()));
            }
            let o = reproduce::run(id, *levels, &limits)?;
            (o.inputs, o.outputs, o.pass)
        }
        Command::Compute(c) => match compute::run(c, &limits)? {
            Output::Dot(dot) => {
                emit(&cli.out, &dot)?;
                return Ok(true);
            }
            Output::Json { inputs, outputs } => (inputs, outputs, true),
        },
    };
    let mut report = Report::new(argv, inputs, outputs);
    if cli.timing {
        report.wall_time_ms = Some(start.elapsed().as_millis() as u64);
    }
    let mut text = serde_json::to_string_pretty(&report).expect("serializable");
    text.push('\n');
    emit(&cli.out, &text)?;
    Ok(pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match panic::catch_unwind(|| run(&cli)) {
        Ok(Ok(true)) => ExitCode::SUCCESS,
        Ok(Ok(false)) => ExitCode::from(1),
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
        Err(_) => ExitCode::from(4),
    }
}
