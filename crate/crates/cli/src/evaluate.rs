//! `evaluate`: score predictions against ground truth before and after the
//! hull pipeline, then write a report CSV and print an aligned table.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{Result, bail};
use clap::{ArgGroup, Args};
use covhuseg::metrics::{self, EvalRecord};
use covhuseg::{dataset, mask_io};
use rayon::prelude::*;

use crate::common::{self, ConfigMap};
use crate::{Outcome, PipelineOpts};

#[derive(Args)]
#[command(group(ArgGroup::new("truth").required(true).args(["gt_dir", "manifest"])))]
pub struct EvaluateArgs {
    /// Directory of predicted masks
    #[arg(long, value_name = "DIR")]
    pred_dir: PathBuf,

    /// Directory of ground-truth masks, paired with predictions by file stem
    #[arg(long, value_name = "DIR")]
    gt_dir: Option<PathBuf>,

    /// Manifest CSV naming ground-truth masks; predictions pair by patch stem
    #[arg(long, value_name = "FILE")]
    manifest: Option<PathBuf>,

    /// Output path for the report CSV
    #[arg(long, value_name = "FILE")]
    report: PathBuf,

    /// Model name recorded in the report row
    #[arg(long, value_name = "NAME", default_value = "model")]
    model_tag: String,

    /// Split name recorded in the report row
    #[arg(long, value_name = "NAME", default_value = "-")]
    split_tag: String,

    #[command(flatten)]
    pipeline: PipelineOpts,

    /// Worker threads for file-level parallelism (default 1)
    #[arg(long, value_name = "N")]
    jobs: Option<usize>,
}

pub fn run(args: &EvaluateArgs, config: &ConfigMap) -> Result<Outcome> {
    let pipeline_config = args.pipeline.resolve(config)?;
    let jobs = config.resolve(args.jobs, "jobs")?;

    let (pairs, mut failures) = match (&args.gt_dir, &args.manifest) {
        (Some(gt_dir), None) => pair_by_stem(&args.pred_dir, gt_dir)?,
        (None, Some(manifest)) => pair_by_manifest(&args.pred_dir, manifest)?,
        _ => unreachable!("clap enforces exactly one ground-truth source"),
    };
    if pairs.is_empty() {
        bail!("no prediction/ground-truth pairs found");
    }

    let results: Vec<Result<EvalRecord>> = common::with_jobs(jobs, || {
        pairs
            .par_iter()
            .map(|(stem, pred_path, gt_path)| {
                let pred = mask_io::load_mask(pred_path)?;
                let gt = mask_io::load_mask(gt_path)?;
                metrics::evaluate_pair(stem.clone(), &pred, &gt, &pipeline_config)
                    .map_err(Into::into)
            })
            .collect()
    })?;

    let mut records = Vec::with_capacity(results.len());
    for ((stem, _, _), result) in pairs.iter().zip(results) {
        match result {
            Ok(record) => records.push(record),
            Err(err) => failures.push(format!("{stem}: {err:#}")),
        }
    }
    for failure in &failures {
        eprintln!("skipped: {failure}");
    }
    if records.is_empty() {
        bail!("no pair evaluated successfully");
    }

    let row = metrics::aggregate(&records, &args.model_tag, &args.split_tag)?;
    let rows = [row];
    metrics::write_report_csv(&rows, &args.report)?;
    print!("{}", metrics::render_report_table(&rows));
    println!(
        "evaluated {} pairs, {} skipped",
        records.len(),
        failures.len()
    );
    if failures.is_empty() {
        Ok(Outcome::Success)
    } else {
        Ok(Outcome::Partial)
    }
}

type Pair = (String, PathBuf, PathBuf);

/// Pairs prediction and ground-truth files that share a stem. Files present
/// on only one side are reported, not silently dropped.
fn pair_by_stem(pred_dir: &Path, gt_dir: &Path) -> Result<(Vec<Pair>, Vec<String>)> {
    let preds = stems_of(pred_dir)?;
    let mut gts = stems_of(gt_dir)?;
    let mut pairs = Vec::new();
    let mut failures = Vec::new();
    for (stem, pred_path) in preds {
        match gts.remove(&stem) {
            Some(gt_path) => pairs.push((stem, pred_path, gt_path)),
            None => failures.push(format!("{stem}: prediction has no ground truth")),
        }
    }
    for stem in gts.into_keys() {
        failures.push(format!("{stem}: ground truth has no prediction"));
    }
    Ok((pairs, failures))
}

/// Pairs manifest mask paths with predictions named after the patch stem.
fn pair_by_manifest(pred_dir: &Path, manifest_path: &Path) -> Result<(Vec<Pair>, Vec<String>)> {
    let manifest = dataset::read_manifest(manifest_path)?;
    let mut preds = stems_of(pred_dir)?;
    let mut pairs = Vec::new();
    let mut failures = Vec::new();
    for entry in manifest.entries() {
        let stem = common::file_stem(&entry.patch_path);
        match preds.remove(&stem) {
            Some(pred_path) => pairs.push((stem, pred_path, entry.mask_path.clone())),
            None => failures.push(format!("{stem}: manifest entry has no prediction")),
        }
    }
    for stem in preds.into_keys() {
        failures.push(format!("{stem}: prediction not in manifest"));
    }
    Ok((pairs, failures))
}

fn stems_of(dir: &Path) -> Result<BTreeMap<String, PathBuf>> {
    let mut stems = BTreeMap::new();
    for path in common::list_images(dir)? {
        let stem = common::file_stem(&path);
        if let Some(previous) = stems.insert(stem.clone(), path) {
            bail!(
                "ambiguous stem {stem:?} in {}: {} vs {}",
                dir.display(),
                previous.display(),
                stems[&stem].display()
            );
        }
    }
    Ok(stems)
}
