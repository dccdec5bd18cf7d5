//! `split`: scan a dataset tree and sample one evaluation split into a
//! manifest CSV.

use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use covhuseg::dataset::{self, LayoutSpec, SplitId, SplitSpec};

use crate::Outcome;
use crate::common::ConfigMap;

#[derive(Args)]
pub struct SplitArgs {
    /// Dataset root: <root>/<group>/<subject>/{img,mask}/<patch>
    #[arg(long, value_name = "DIR")]
    root: PathBuf,

    /// Split to sample: A (half subjects), B (half patches), C (half of
    /// both), D (quarter patches)
    #[arg(long, value_name = "ID")]
    split: Option<String>,

    /// Sampling seed
    #[arg(long, value_name = "N")]
    seed: Option<u64>,

    /// Output manifest CSV path
    #[arg(long, value_name = "FILE")]
    out: PathBuf,

    /// Per-subject directory holding patch images
    #[arg(long, value_name = "NAME")]
    img_dir: Option<String>,

    /// Per-subject directory holding ground-truth masks
    #[arg(long, value_name = "NAME")]
    mask_dir: Option<String>,
}

pub fn run(args: &SplitArgs, config: &ConfigMap) -> Result<Outcome> {
    let defaults = LayoutSpec::default();
    let layout = LayoutSpec {
        img_dir: config.resolve_or(args.img_dir.clone(), "img_dir", defaults.img_dir)?,
        mask_dir: config.resolve_or(args.mask_dir.clone(), "mask_dir", defaults.mask_dir)?,
    };
    let split: SplitId = config
        .resolve(args.split.clone(), "split")?
        .ok_or_else(|| anyhow::anyhow!("--split is required (A, B, C, or D)"))?
        .parse()
        .map_err(|err: covhuseg::Error| anyhow::anyhow!("--split: {err}"))?;
    let seed = config.resolve_or(args.seed, "seed", 0)?;

    let (manifest, warnings) = dataset::scan_manifest(&args.root, &layout)?;
    for warning in &warnings {
        eprintln!("warning: {warning}");
    }
    let sampled = dataset::make_split(&manifest, &SplitSpec { split, seed })?;
    dataset::write_manifest(&sampled, &args.out)?;
    println!(
        "split {}: kept {} of {} entries -> {}",
        split.as_str(),
        sampled.len(),
        manifest.len(),
        args.out.display()
    );
    Ok(Outcome::Success)
}
