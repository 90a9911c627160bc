//! Command-line front end for the spin-market simulator and the
//! stylized-facts analysis toolkit.
//!
//! Four subcommands cover the full workflow:
//!
//! * `simulate` — run the lattice model and write magnetization, returns,
//!   statistics, and optional lattice snapshots.
//! * `analyze` — compute the same statistics report from an empirical
//!   price CSV.
//! * `compare` — diff two statistics reports side by side.
//! * `snapshot` — render lattice configurations at chosen sweeps without
//!   the full analysis pipeline.
//!
//! Errors are printed to stderr and mapped to stable exit codes so shell
//! scripts can distinguish failure classes: `1` for I/O and parse errors,
//! `2` for configuration errors, `3` for data that is statistically
//! unusable (too short, degenerate, or out of a method's supported range).

mod commands;
mod config;

use clap::{Parser, Subcommand};
use spinmarket::Error;

use commands::{analyze, compare, simulate, snapshot};

/// Spin-lattice market simulator and stylized-facts toolkit.
#[derive(Debug, Parser)]
#[command(name = "spinmarket", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the lattice simulation and write series, returns, and statistics.
    Simulate(simulate::SimulateArgs),
    /// Compute the statistics report for an empirical price CSV.
    Analyze(analyze::AnalyzeArgs),
    /// Compare two statistics reports and write a diff document.
    Compare(compare::CompareArgs),
    /// Render lattice snapshots at chosen sweeps.
    Snapshot(snapshot::SnapshotArgs),
}

/// Maps an error to the process exit code documented in the README.
///
/// The grouping is by what the caller can do about it: `1` means a file
/// could not be read or parsed, `2` means the invocation itself was
/// inconsistent, and `3` means the inputs were readable but statistically
/// unusable. Wrapped errors are classified by their root cause.
fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io { .. } | Error::Csv(_) | Error::Json(_) | Error::Parse(_) => 1,
        Error::RowValidation { .. } => 1,
        Error::InvalidConfig(_)
        | Error::InvalidDimension { .. }
        | Error::SiteOutOfRange { .. }
        | Error::MissingColumn { .. }
        | Error::SchemaMismatch { .. } => 2,
        Error::InsufficientData(_)
        | Error::DegenerateVariance(_)
        | Error::NonPositivePrice { .. }
        | Error::SampleSizeOutOfRange { .. }
        | Error::EmptyInput => 3,
        Error::Context { source, .. } => exit_code(source),
    }
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(args) => simulate::run(&args),
        Command::Analyze(args) => analyze::run(&args),
        Command::Compare(args) => compare::run(&args),
        Command::Snapshot(args) => snapshot::run(&args),
    };
    if let Err(err) = result {
        eprintln!("error: {err}");
        std::process::exit(exit_code(&err));
    }
}
