//! `noise`: add clamped Gaussian noise to every grayscale image in a
//! directory. Each file gets its own stream, derived from the base seed and
//! the file's position in sorted order, so a rerun is byte-identical and
//! adding files later does not shift earlier streams.

use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use covhuseg::mask_io;
use covhuseg::perturb::{self, DEFAULT_NOISE_STD};
use rayon::prelude::*;

use crate::Outcome;
use crate::common::{self, ConfigMap};

#[derive(Args)]
pub struct NoiseArgs {
    /// Directory of input grayscale images (.png or .pgm)
    #[arg(long, value_name = "DIR")]
    in_dir: PathBuf,

    /// Directory for noisy images, created if missing; filenames preserved
    #[arg(long, value_name = "DIR")]
    out_dir: PathBuf,

    /// Noise standard deviation on the [0, 1] intensity scale
    #[arg(long, value_name = "STD")]
    std: Option<f64>,

    /// Base seed; file at sorted index i uses seed XOR i
    #[arg(long, value_name = "N")]
    seed: Option<u64>,

    /// Worker threads for file-level parallelism (default 1)
    #[arg(long, value_name = "N")]
    jobs: Option<usize>,
}

pub fn run(args: &NoiseArgs, config: &ConfigMap) -> Result<Outcome> {
    let std = config.resolve_or(args.std, "std", DEFAULT_NOISE_STD)?;
    let seed = config.resolve_or(args.seed, "seed", 0)?;
    let jobs = config.resolve(args.jobs, "jobs")?;
    let files = common::list_images(&args.in_dir)?;
    fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating output directory {}", args.out_dir.display()))?;

    let results: Vec<Result<()>> = common::with_jobs(jobs, || {
        files
            .par_iter()
            .enumerate()
            .map(|(idx, path)| {
                let image = mask_io::load_gray(path)?;
                let noisy = perturb::add_gaussian_noise(&image, std, seed ^ idx as u64)?;
                mask_io::save_gray(&noisy, args.out_dir.join(common::file_name(path)))?;
                Ok(())
            })
            .collect()
    })?;

    let mut failures = 0usize;
    for (path, result) in files.iter().zip(&results) {
        if let Err(err) = result {
            failures += 1;
            eprintln!("error: {}: {err:#}", common::file_name(path));
        }
    }
    println!(
        "noised {}/{} files (std {std})",
        results.len() - failures,
        results.len()
    );
    if failures > 0 {
        Ok(Outcome::Partial)
    } else {
        Ok(Outcome::Success)
    }
}
