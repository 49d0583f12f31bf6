//! `foldylax`: scenario files in, JSON and CSV reports out.
//!
//! Exit status is 0 on success, 2 when the input fails validation (including
//! a failing `validate` run) and 1 on a hard numerical or IO error.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod generate;
pub mod off;
pub mod output;
pub mod scenario;

use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use foldylax_core::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_HARD_ERROR: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad scenario, bad arguments or a failed validation check.
    Validation,
    /// IO failure or a numerical breakdown.
    Hard,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn invalid(message: impl Into<String>) -> Self {
        Self { kind: ErrorKind::Validation, message: message.into() }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self { kind: ErrorKind::Hard, message: message.into() }
    }

    /// Wraps a library error, naming the scenario field it came from.
    pub fn from_core(field: &str, e: Error) -> Self {
        let kind = match e {
            Error::SingularOperator { .. }
            | Error::WrongSignTensor { .. }
            | Error::SingularSystem { .. }
            | Error::NoConvergence { .. }
            | Error::Divergence { .. } => ErrorKind::Hard,
            _ => ErrorKind::Validation,
        };
        Self { kind, message: format!("{field}: {e}") }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Validation => EXIT_VALIDATION,
            ErrorKind::Hard => EXIT_HARD_ERROR,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

#[derive(Debug, Parser)]
#[command(name = "foldylax", version, about = "Foldy-Lax scattering by clusters of small perfect conductors")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Scenario file (JSON, schema 1).
    #[arg(long, global = true)]
    pub scenario: Option<PathBuf>,

    /// Output file; defaults to the scenario's `output` field, then stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads; results do not depend on this.
    #[arg(long, global = true, env = "FOLDY_THREADS")]
    pub threads: Option<usize>,

    /// Seed for randomized helpers; recorded in output metadata.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Polarization and virtual-mass tensors of every body (JSON).
    Tensor,
    /// Solve the coupled dipole system (JSON).
    Solve,
    /// Far-field pattern on a direction set (CSV).
    Farfield,
    /// Scattered near field at sample points (CSV).
    Nearfield,
    /// Error budget with every term (JSON).
    Budget,
    /// Built-in oracle suite; exit 2 if any check fails (JSON).
    Validate,
    /// Write a generated scenario (JSON).
    Gen(GenArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(subcommand)]
    pub layout: GenLayout,
}

#[derive(Debug, Subcommand)]
pub enum GenLayout {
    /// n^3 spheres on a cubic lattice.
    Lattice {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        spacing: f64,
        #[arg(long)]
        radius: f64,
    },
    /// Spheres placed at random in a cube, with a minimum boundary gap.
    Random {
        #[arg(long)]
        count: usize,
        #[arg(long)]
        radius: f64,
        #[arg(long, default_value_t = 2.0)]
        extent: f64,
        #[arg(long)]
        min_gap: f64,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Tensor => "tensor",
            Command::Solve => "solve",
            Command::Farfield => "farfield",
            Command::Nearfield => "nearfield",
            Command::Budget => "budget",
            Command::Validate => "validate",
            Command::Gen(_) => "gen",
        }
    }
}

/// Runs one invocation and returns the process exit status. Diagnostics go to
/// stderr.
pub fn run(cli: Cli) -> i32 {
    let outcome = match cli.threads {
        Some(0) => Err(CliError::invalid("--threads: must be at least 1")),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| commands::dispatch(&cli)),
            Err(e) => Err(CliError::io(format!("--threads: cannot start worker pool: {e}"))),
        },
        None => commands::dispatch(&cli),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
