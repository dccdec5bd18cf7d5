//! Shared plumbing: config-file merging, input discovery, and job pools.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{Context, Result, bail, ensure};
use covhuseg::PipelineConfig;

use crate::PipelineOpts;

/// Key=value pairs from an optional config file. Keys are normalized so
/// `hull-algorithm` and `hull_algorithm` name the same entry; values keep
/// their exact text and are parsed on lookup with the flag's own parser.
pub struct ConfigMap {
    entries: BTreeMap<String, String>,
}

impl ConfigMap {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let mut entries = BTreeMap::new();
        let Some(path) = path else {
            return Ok(Self { entries });
        };
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading config file {}", path.display()))?;
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!(
                    "config file {} line {}: expected key=value, got {line:?}",
                    path.display(),
                    idx + 1
                );
            };
            entries.insert(normalize_key(key), value.trim().to_string());
        }
        Ok(Self { entries })
    }

    /// Flag value if given, else the parsed config entry, else `None`.
    pub fn resolve<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.entries.get(&normalize_key(key)) {
            Some(raw) => {
                let value = raw
                    .parse::<T>()
                    .map_err(|err| anyhow::anyhow!("config key {key}: {err}"))?;
                Ok(Some(value))
            }
            None => Ok(None),
        }
    }

    /// Like `resolve` but falls back to a default.
    pub fn resolve_or<T>(&self, flag: Option<T>, key: &str, default: T) -> Result<T>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        Ok(self.resolve(flag, key)?.unwrap_or(default))
    }
}

fn normalize_key(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('-', "_")
}

impl PipelineOpts {
    /// Merge flags over config entries over `PipelineConfig::default()`.
    pub fn resolve(&self, config: &ConfigMap) -> Result<PipelineConfig> {
        let defaults = PipelineConfig::default();
        let resolved = PipelineConfig {
            connectivity: config.resolve_or(
                parse_flag(&self.connectivity, "--connectivity")?,
                "connectivity",
                defaults.connectivity,
            )?,
            hull_algorithm: config.resolve_or(
                parse_flag(&self.hull_algorithm, "--hull-algorithm")?,
                "hull_algorithm",
                defaults.hull_algorithm,
            )?,
            min_component_area: config.resolve_or(
                self.min_component_area,
                "min_component_area",
                defaults.min_component_area,
            )?,
            threshold: config.resolve_or(self.threshold, "threshold", defaults.threshold)?,
        };
        ensure!(
            resolved.threshold.is_finite() && (0.0..=1.0).contains(&resolved.threshold),
            "--threshold must lie in [0, 1], got {}",
            resolved.threshold
        );
        Ok(resolved)
    }
}

fn parse_flag<T>(flag: &Option<String>, name: &str) -> Result<Option<T>>
where
    T: FromStr,
    T::Err: std::fmt::Display,
{
    match flag {
        Some(raw) => {
            let value = raw
                .parse::<T>()
                .map_err(|err| anyhow::anyhow!("{name}: {err}"))?;
            Ok(Some(value))
        }
        None => Ok(None),
    }
}

/// Inclusive `LO..HI` range, or a single number meaning `N..N`.
pub fn parse_range(raw: &str) -> Result<(u32, u32)> {
    if let Some((lo, hi)) = raw.split_once("..") {
        let lo = lo.trim().parse::<u32>().context("range start")?;
        let hi = hi.trim().parse::<u32>().context("range end")?;
        Ok((lo, hi))
    } else {
        let n = raw.trim().parse::<u32>().context("range value")?;
        Ok((n, n))
    }
}

/// Image files (by extension) directly inside `dir`, sorted by file name so
/// batch order and any derived per-file seeds are stable.
pub fn list_images(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    let entries =
        fs::read_dir(dir).with_context(|| format!("reading directory {}", dir.display()))?;
    for entry in entries {
        let entry = entry.with_context(|| format!("reading directory {}", dir.display()))?;
        let path = entry.path();
        if path.is_file() && has_image_extension(&path) {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

pub fn has_image_extension(path: &Path) -> bool {
    matches!(
        path.extension().and_then(|ext| ext.to_str()),
        Some(ext) if ext.eq_ignore_ascii_case("png") || ext.eq_ignore_ascii_case("pgm")
    )
}

pub fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|name| name.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

pub fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|stem| stem.to_string_lossy().into_owned())
        .unwrap_or_else(|| file_name(path))
}

/// Run `body` on a rayon pool with `jobs` threads (default 1). Output order
/// never depends on the thread count because callers collect indexed results.
pub fn with_jobs<T: Send>(jobs: Option<usize>, body: impl FnOnce() -> T + Send) -> Result<T> {
    let threads = jobs.unwrap_or(1).max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .context("building worker pool")?;
    Ok(pool.install(body))
}
