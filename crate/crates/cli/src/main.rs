//! Command-line front end for convex-hull mask post-processing.
//!
//! Subcommands cover the full workflow: `process` rewrites masks through the
//! hull pipeline, `evaluate` scores predictions against ground truth with and
//! without the pipeline, `split` samples evaluation subsets from a dataset
//! tree, `noise` perturbs grayscale images, `synth` generates paired
//! synthetic masks, and `report` renders or checks score tables.
//!
//! Exit codes: 0 on full success, 1 on operational errors or partial failure
//! (some files failed while others were processed), 2 on usage errors.

mod common;
mod evaluate;
mod noise;
mod process;
mod report;
mod split;
mod synth;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

const EXIT_CODE_HELP: &str =
    "Exit codes:\n  0  full success\n  1  operational error or partial failure\n  2  usage error";

#[derive(Parser)]
#[command(name = "covhuseg", version, about = "Convex-hull post-processing for binary segmentation masks", after_help = EXIT_CODE_HELP)]
struct Cli {
    /// Config file with one key=value pair per line; explicit flags win
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply the hull pipeline to every mask in a directory
    Process(process::ProcessArgs),
    /// Score predictions against ground truth, before and after the pipeline
    Evaluate(evaluate::EvaluateArgs),
    /// Sample a subject/patch split from a dataset tree into a manifest
    Split(split::SplitArgs),
    /// Add clamped Gaussian noise to every grayscale image in a directory
    Noise(noise::NoiseArgs),
    /// Generate paired synthetic ground-truth and degraded prediction masks
    Synth(synth::SynthArgs),
    /// Render a score table from a report CSV, optionally checking arithmetic
    Report(report::ReportArgs),
}

/// Per-command outcome. `Partial` means some inputs failed while the rest
/// were handled; it maps to the same exit code as a hard error so callers
/// never mistake it for a clean run.
pub enum Outcome {
    Success,
    Partial,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match common::ConfigMap::load(cli.config.as_deref()) {
        Ok(config) => config,
        Err(err) => {
            eprintln!("error: {err:#}");
            return ExitCode::from(1);
        }
    };
    let result = match &cli.command {
        Command::Process(args) => process::run(args, &config),
        Command::Evaluate(args) => evaluate::run(args, &config),
        Command::Split(args) => split::run(args, &config),
        Command::Noise(args) => noise::run(args, &config),
        Command::Synth(args) => synth::run(args, &config),
        Command::Report(args) => report::run(args, &config),
    };
    match result {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::Partial) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

/// Pipeline knobs shared by `process` and `evaluate`. Each flag mirrors one
/// config-file key of the same name (dashes and underscores interchangeable).
#[derive(Args)]
pub struct PipelineOpts {
    /// Component connectivity: four or eight
    #[arg(long, value_name = "CONN")]
    connectivity: Option<String>,

    /// Hull construction algorithm: monotone-chain or quickhull
    #[arg(long, value_name = "ALGO")]
    hull_algorithm: Option<String>,

    /// Drop components smaller than this many pixels before hulling
    #[arg(long, value_name = "PIXELS")]
    min_component_area: Option<u64>,

    /// Foreground threshold applied to probability maps
    #[arg(long, value_name = "T")]
    threshold: Option<f64>,
}
