//! `synth`: generate paired synthetic masks. For each trial a convex-shape
//! ground truth goes to out_dir/gt and its degraded copy to out_dir/pred,
//! both named trial_NNNN.pgm, ready for `evaluate --pred-dir ... --gt-dir`.
//! Trial i uses seed XOR i (and degrade-seed XOR i), the same derivation the
//! library experiment uses, so scores match across the two routes.

use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use covhuseg::mask_io;
use covhuseg::perturb::{self, DegradeSpec, SynthShape, SynthSpec};

use crate::Outcome;
use crate::common::{self, ConfigMap};

#[derive(Args)]
pub struct SynthArgs {
    /// Output root; gt/ and pred/ subdirectories are created inside
    #[arg(long, value_name = "DIR")]
    out_dir: PathBuf,

    /// Number of mask pairs to generate
    #[arg(long, value_name = "N")]
    trials: Option<u32>,

    /// Component shape: ellipse or polygon
    #[arg(long, value_name = "SHAPE")]
    shape: Option<String>,

    /// Component size (semi-axis or polygon half-extent) as LO..HI pixels
    #[arg(long, value_name = "LO..HI")]
    size_range: Option<String>,

    /// Components per ground-truth mask
    #[arg(long, value_name = "N")]
    count_per_image: Option<u32>,

    /// Canvas width in pixels
    #[arg(long, value_name = "W")]
    width: Option<u32>,

    /// Canvas height in pixels
    #[arg(long, value_name = "H")]
    height: Option<u32>,

    /// Base generation seed; trial i uses seed XOR i
    #[arg(long, value_name = "N")]
    seed: Option<u64>,

    /// Holes punched into each prediction
    #[arg(long, value_name = "N")]
    hole_count: Option<u32>,

    /// Hole radius as LO..HI pixels
    #[arg(long, value_name = "LO..HI")]
    hole_radius_range: Option<String>,

    /// Probability of clearing each boundary pixel
    #[arg(long, value_name = "P")]
    boundary_erosion_prob: Option<f64>,

    /// Probability of clearing each foreground pixel
    #[arg(long, value_name = "P")]
    pixel_dropout_prob: Option<f64>,

    /// Probability of setting each background pixel (breaks the
    /// improvement guarantee; defaults to 0)
    #[arg(long, value_name = "P")]
    speckle_prob: Option<f64>,

    /// Base degradation seed; trial i uses degrade-seed XOR i
    #[arg(long, value_name = "N")]
    degrade_seed: Option<u64>,
}

pub fn run(args: &SynthArgs, config: &ConfigMap) -> Result<Outcome> {
    let (synth, deg) = resolve_specs(args, config)?;
    let trials = config.resolve_or(args.trials, "trials", 16)?;

    let gt_dir = args.out_dir.join("gt");
    let pred_dir = args.out_dir.join("pred");
    for dir in [&gt_dir, &pred_dir] {
        fs::create_dir_all(dir)
            .with_context(|| format!("creating output directory {}", dir.display()))?;
    }

    for trial in 0..trials {
        let synth_trial = SynthSpec {
            seed: synth.seed ^ trial as u64,
            ..synth
        };
        let deg_trial = DegradeSpec {
            seed: deg.seed ^ trial as u64,
            ..deg
        };
        let (gt, _) = perturb::gen_convex_mask(&synth_trial)?;
        let pred = perturb::degrade(&gt, &deg_trial);
        let name = format!("trial_{trial:04}.pgm");
        mask_io::save_mask(&gt, gt_dir.join(&name))?;
        mask_io::save_mask(&pred, pred_dir.join(&name))?;
    }
    println!(
        "generated {trials} mask pairs under {}",
        args.out_dir.display()
    );
    Ok(Outcome::Success)
}

fn resolve_specs(args: &SynthArgs, config: &ConfigMap) -> Result<(SynthSpec, DegradeSpec)> {
    let sd = SynthSpec::default();
    let dd = DegradeSpec::default();
    let shape: SynthShape = match config.resolve(args.shape.clone(), "shape")? {
        Some(raw) => raw
            .parse()
            .map_err(|err: String| anyhow::anyhow!("--shape: {err}"))?,
        None => sd.shape,
    };
    let size_range = match config.resolve(args.size_range.clone(), "size_range")? {
        Some(raw) => common::parse_range(&raw).context("--size-range")?,
        None => sd.size_range,
    };
    let hole_radius_range =
        match config.resolve(args.hole_radius_range.clone(), "hole_radius_range")? {
            Some(raw) => common::parse_range(&raw).context("--hole-radius-range")?,
            None => dd.hole_radius_range,
        };
    let synth = SynthSpec {
        shape,
        size_range,
        count_per_image: config.resolve_or(
            args.count_per_image,
            "count_per_image",
            sd.count_per_image,
        )?,
        width: config.resolve_or(args.width, "width", sd.width)?,
        height: config.resolve_or(args.height, "height", sd.height)?,
        seed: config.resolve_or(args.seed, "seed", sd.seed)?,
    };
    let deg = DegradeSpec {
        hole_count: config.resolve_or(args.hole_count, "hole_count", dd.hole_count)?,
        hole_radius_range,
        boundary_erosion_prob: config.resolve_or(
            args.boundary_erosion_prob,
            "boundary_erosion_prob",
            dd.boundary_erosion_prob,
        )?,
        pixel_dropout_prob: config.resolve_or(
            args.pixel_dropout_prob,
            "pixel_dropout_prob",
            dd.pixel_dropout_prob,
        )?,
        speckle_prob: config.resolve_or(args.speckle_prob, "speckle_prob", dd.speckle_prob)?,
        seed: config.resolve_or(args.degrade_seed, "degrade_seed", dd.seed)?,
    };
    Ok((synth, deg))
}
