//! Command-line front end for the `qdce` simulator.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

pub type CliResult<T> = std::result::Result<T, Box<dyn std::error::Error>>;

#[derive(Debug, Parser)]
#[command(name = "qdce", version, about = "Quantum delayed-choice experiment simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Single-ancilla sweep over (alpha, phi).
    Qdce(SweepArgs),
    /// Entangled-ancilla sweep with post-selection on the partner qubit.
    EaQdce(SweepArgs),
    /// Fringe visibility of the detector-0 intensity per alpha.
    Visibility(VisibilityArgs),
    /// Entangled-ancilla predictions against the hidden-variable model.
    CompareHv(CompareArgs),
    /// Monte Carlo estimate of the hidden-variable intensity.
    HvMc(HvMcArgs),
}

#[derive(Debug, Args)]
struct GridArgs {
    /// Ancilla angle; repeat for several values.
    #[arg(long = "alpha", value_name = "RAD", allow_negative_numbers = true, conflicts_with = "alpha_steps")]
    alpha: Vec<f64>,
    /// Evenly spaced alphas over [0, pi/2].
    #[arg(long, value_name = "N")]
    alpha_steps: Option<usize>,
    /// Number of phases over [0, 2pi].
    #[arg(long, value_name = "N")]
    phi_steps: Option<usize>,
    /// Read --alpha values as degrees.
    #[arg(long)]
    degrees: bool,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// CSV destination; stdout when omitted.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Line plot destination.
    #[arg(long, value_name = "PATH")]
    svg: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Exact,
    Sampled,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    output: OutputArgs,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long, value_name = "N")]
    shots: Option<u64>,
    #[arg(long, value_name = "N")]
    reps: Option<u64>,
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Calibration file (JSON).
    #[arg(long, value_name = "PATH")]
    noise: Option<PathBuf>,
    /// Keep only one post-selection branch (entangled scheme).
    #[arg(long, value_name = "0|1")]
    branch: Option<u8>,
    /// Base configuration: a sweep config or a run manifest. Flags override it.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Alpha x phi heatmap of e0.
    #[arg(long, value_name = "PATH")]
    heatmap: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SchemeArg {
    Qdce,
    EaQdce,
}

#[derive(Debug, Args)]
struct VisibilityArgs {
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    output: OutputArgs,
    #[arg(long, value_enum, default_value = "qdce")]
    scheme: SchemeArg,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long, value_name = "N")]
    shots: Option<u64>,
    #[arg(long, value_name = "N")]
    reps: Option<u64>,
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    #[arg(long, value_name = "PATH")]
    noise: Option<PathBuf>,
    #[arg(long, value_name = "0|1")]
    branch: Option<u8>,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct HvMcArgs {
    #[arg(long, value_name = "N", default_value_t = 8)]
    phi_steps: usize,
    #[arg(long, value_name = "N", default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, value_name = "N", default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

/// Runs the tool with the given arguments (program name first) and returns
/// the process exit code: 0 on success, 1 on a runtime or domain error,
/// 2 on a usage error.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let invocation = argv
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join(" ");
    let outcome = match cli.command {
        Command::Qdce(args) => commands::sweep(qdce::circuit::Scheme::Qdce, args, &invocation),
        Command::EaQdce(args) => commands::sweep(qdce::circuit::Scheme::EaQdce, args, &invocation),
        Command::Visibility(args) => commands::visibility(args, &invocation),
        Command::CompareHv(args) => commands::compare_hv(args, &invocation),
        Command::HvMc(args) => commands::hv_mc(args, &invocation),
    };
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
