//! `curveflow`: run, analyze, compare and sweep nonlocal convex-curve flows.

mod commands;
mod config;
mod svg;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "curveflow",
    version,
    about = "Simulator and verification harness for nonlocal flows of convex plane curves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a configured flow; writes diagnostics.csv, numbered curve
    /// snapshots and an optional SVG overlay into the output directory.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also draw all recorded curves plus the limiting circle.
        #[arg(long)]
        svg: bool,
    },
    /// Print the scalar quantities and inequality residuals of a curve
    /// snapshot as one CSV row.
    Analyze { curve: PathBuf },
    /// Run the solver against the exact spectral evolution and write an
    /// error report; fails with exit code 4 if the sup error exceeds the
    /// threshold.
    Compare {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Overrides output.threshold from the config (default 1e-5).
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Run every grid point of the [sweep] section and write
    /// sweep_summary.csv; points may execute concurrently.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run { config, out, svg } => commands::cmd_run(&config, &out, svg),
        Command::Analyze { curve } => commands::cmd_analyze(&curve),
        Command::Compare { config, out, threshold } => {
            commands::cmd_compare(&config, &out, threshold)
        }
        Command::Sweep { config, out } => commands::cmd_sweep(&config, &out),
    };
    std::process::exit(code);
}
