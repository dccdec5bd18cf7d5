//! `process`: run the hull pipeline over every mask in a directory.

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::Args;
use covhuseg::mask_io;
use covhuseg::pipeline;
use rayon::prelude::*;

use crate::common::{self, ConfigMap};
use crate::{Outcome, PipelineOpts};

#[derive(Args)]
pub struct ProcessArgs {
    /// Directory of input masks (.png or .pgm)
    #[arg(long, value_name = "DIR")]
    in_dir: PathBuf,

    /// Directory for processed masks, created if missing; filenames preserved
    #[arg(long, value_name = "DIR")]
    out_dir: PathBuf,

    #[command(flatten)]
    pipeline: PipelineOpts,

    /// Worker threads for file-level parallelism (default 1)
    #[arg(long, value_name = "N")]
    jobs: Option<usize>,
}

pub fn run(args: &ProcessArgs, config: &ConfigMap) -> Result<Outcome> {
    let pipeline_config = args.pipeline.resolve(config)?;
    let jobs = config.resolve(args.jobs, "jobs")?;
    let files = common::list_images(&args.in_dir)?;
    fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating output directory {}", args.out_dir.display()))?;

    let started = Instant::now();
    let results: Vec<Result<f64>> = common::with_jobs(jobs, || {
        files
            .par_iter()
            .map(|path| {
                let file_started = Instant::now();
                let mask = mask_io::load_mask(path)?;
                let processed = pipeline::covhuseg(&mask, &pipeline_config)?;
                mask_io::save_mask(&processed, args.out_dir.join(common::file_name(path)))?;
                Ok(file_started.elapsed().as_secs_f64() * 1e3)
            })
            .collect()
    })?;

    let mut failures = 0usize;
    for (path, result) in files.iter().zip(&results) {
        let name = common::file_name(path);
        match result {
            Ok(ms) => println!("processed {name} in {ms:.2} ms"),
            Err(err) => {
                failures += 1;
                eprintln!("error: {name}: {err:#}");
            }
        }
    }
    let total_ms = started.elapsed().as_secs_f64() * 1e3;
    println!(
        "processed {}/{} files in {total_ms:.2} ms",
        results.len() - failures,
        results.len()
    );
    if failures > 0 {
        Ok(Outcome::Partial)
    } else {
        Ok(Outcome::Success)
    }
}
