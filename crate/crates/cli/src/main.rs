//! `tlsg`: gadget search, encoding, verification, annealing simulation and
//! SVG export from the command line.
//!
//! Exit codes: 0 success, 1 other failure, 2 parse error, 3 empty or
//! infeasible result, 4 verification mismatch, 5 budget exceeded.

mod commands;
mod config;
mod inputs;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{EncodeArgs, ExportArgs, SearchArgs, SimulateArgs, VerifyArgs};

#[derive(Parser)]
#[command(name = "tlsg", version, about = "Gadget synthesis and unit-disk encoding of weighted independent-set problems")]
struct Cli {
    /// JSON file with a section per subcommand; flags win over it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed recorded in artifacts and used for sampling.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search lattice patches for gadgets realising logical constraints.
    Search(SearchArgs),
    /// Compile a graph into a weighted lattice layout.
    Encode(EncodeArgs),
    /// Check an encoding against the exact optimum of its source graph.
    Verify(VerifyArgs),
    /// Anneal small layouts and report violation rates.
    Simulate(SimulateArgs),
    /// Draw a layout as SVG.
    ExportSvg(ExportArgs),
}

/// An error carrying its exit code.
#[derive(Debug)]
pub struct Exit {
    pub code: u8,
    pub message: String,
}

impl Exit {
    pub fn parse(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    pub fn empty(message: impl Into<String>) -> Self {
        Self { code: 3, message: message.into() }
    }

    pub fn mismatch(message: impl Into<String>) -> Self {
        Self { code: 4, message: message.into() }
    }
}

impl fmt::Display for Exit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Exit {}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<Exit>() {
            return e.code;
        }
        if let Some(e) = cause.downcast_ref::<tlsg::Error>() {
            use tlsg::Error::*;
            return match e {
                Parse(_) | Json(_) | InvalidGraph(_) | InvalidLayout(_) => 2,
                LibraryMiss { .. } => 3,
                Budget(_) | NodeBudget { .. } | EnumerationCap { .. } | SolutionCap { .. } | SizeCap { .. } => 5,
                _ => 1,
            };
        }
        if cause.downcast_ref::<serde_json::Error>().is_some() {
            return 2;
        }
    }
    1
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = cli.config.as_deref();
    let result = match cli.command {
        Command::Search(a) => commands::search(a, cli.seed, cfg),
        Command::Encode(a) => commands::encode(a, cli.seed, cfg),
        Command::Verify(a) => commands::verify(a, cli.seed, cfg),
        Command::Simulate(a) => commands::simulate(a, cli.seed, cfg),
        Command::ExportSvg(a) => commands::export_svg(a, cli.seed, cfg),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
