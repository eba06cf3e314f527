//! `lingrowth` command-line driver.
//!
//! Exit codes: 0 ok, 1 a check failed with a witness, 2 configuration
//! error, 3 numerical error, 4 unknown command or experiment.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "lingrowth", version, about = "Linear-growth functionals with measure data")]
pub struct Cli {
    /// Output directory, created if missing.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Seed for randomised test-set families.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; 0 lets the runtime decide.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the relaxed functional of a BV function.
    Evaluate { config: PathBuf },
    /// Minimise over a 1D grid; writes result JSON, trace and profile CSVs.
    Minimize { config: PathBuf },
    /// Run a named experiment: borderline-area, remark-h4, vectorial.
    Experiment {
        name: String,
        /// Parameters as inline JSON.
        #[arg(long, conflicts_with = "params_file")]
        params: Option<String>,
        /// Parameters from a JSON file.
        #[arg(long)]
        params_file: Option<PathBuf>,
    },
    /// Check the isoperimetric condition, optionally with a calibration field.
    IcCheck { config: PathBuf },
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numeric(String),
    Unknown(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Unknown(_) => 4,
        }
    }
}

impl From<lingrowth::Error> for CliError {
    fn from(e: lingrowth::Error) -> Self {
        if e.is_config() {
            CliError::Config(e.to_string())
        } else {
            CliError::Numeric(e.to_string())
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numeric(m) => write!(f, "numerical error: {m}"),
            CliError::Unknown(m) => write!(f, "{m}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                ErrorKind::InvalidSubcommand => 4,
                ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand | ErrorKind::MissingSubcommand => 4,
                _ => 2,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("configuration error: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("lingrowth: {e}");
            ExitCode::from(e.code())
        }
    }
}
