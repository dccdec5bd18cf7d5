use std::path::PathBuf;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {reason}")]
    InvalidImage { path: PathBuf, reason: String },

    #[error("{path}: unsupported image format ({reason})")]
    UnsupportedImage { path: PathBuf, reason: String },

    #[error("threshold {0} is outside [0, 1]")]
    ThresholdRange(f64),

    #[error("mask dimensions differ: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(u32, u32, u32, u32),

    #[error("buffer length {len} does not match {width}x{height}")]
    BufferSize { width: u32, height: u32, len: usize },

    #[error("intensity {value} at index {index} is outside [0, 1]")]
    IntensityRange { index: usize, value: f32 },

    #[error("component id {id} is out of range 1..={max}")]
    ComponentId { id: u32, max: u32 },

    #[error("convex hull of an empty point set")]
    EmptyPointSet,

    #[error("polygon vertex ({x}, {y}) lies outside the {width}x{height} raster")]
    VertexOutOfBounds {
        x: i64,
        y: i64,
        width: u32,
        height: u32,
    },

    #[error("standard deviation must be non-negative, got {0}")]
    NegativeStd(f64),

    #[error("placed only {placed} of {requested} components after {retries} retries")]
    Packing {
        placed: u32,
        requested: u32,
        retries: u32,
    },

    #[error(
        "trial {trial}: dice dropped from {dice_without} to {dice_with} under subtractive degradation"
    )]
    TheoremViolation {
        trial: u32,
        dice_without: f64,
        dice_with: f64,
    },

    #[error("manifest is empty")]
    EmptyManifest,

    #[error("no evaluation records to aggregate")]
    NoRecords,

    #[error("unknown group {0:?} (expected normal, 56Nx, DN or NEP25)")]
    UnknownGroup(String),

    #[error("unknown split {0:?} (expected A, B, C or D)")]
    UnknownSplit(String),

    #[error("{dir}: ambiguous pairing for key {key:?}")]
    AmbiguousPairing { dir: PathBuf, key: String },

    #[error("{path}:{line}: {reason}")]
    InvalidManifest {
        path: PathBuf,
        line: u64,
        reason: String,
    },

    #[error("{path}:{line}: {reason}")]
    InvalidReport {
        path: PathBuf,
        line: u64,
        reason: String,
    },

    #[error("non-UTF-8 path {0:?} cannot be stored in a manifest")]
    NonUtf8Path(PathBuf),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn invalid_image(path: impl Into<PathBuf>, reason: impl Into<String>) -> Self {
        Error::InvalidImage {
            path: path.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn unsupported_image(path: impl Into<PathBuf>, reason: impl Into<String>) -> Self {
        Error::UnsupportedImage {
            path: path.into(),
            reason: reason.into(),
        }
    }
}
