//! Convex-hull post-processing for binary segmentation masks, with the
//! evaluation machinery around it: Dice/IoU scoring, with/without increase
//! reports, dataset split sampling, and seeded noise and degradation for
//! synthetic experiments.
//!
//! The core operation replaces every connected component of a mask by the
//! filled convex hull of its boundary. Segmentation targets that are convex
//! blobs (holes, ragged borders and dropouts in model output are all
//! subtractive mistakes) can only gain true positives from this, which is
//! what the metrics and experiment modules quantify.
//!
//! Geometry is exact: hulls, point classification and scanline filling use
//! integer arithmetic only, so the two hull algorithms, the rasterizer and
//! the per-pixel classifier agree bit-for-bit. Everything randomized takes
//! an explicit 64-bit seed and is reproducible across platforms.

pub mod dataset;
pub mod error;
pub mod hull;
pub mod labeling;
pub mod mask_io;
pub mod metrics;
pub mod perturb;
pub mod pipeline;
pub mod raster;

pub use error::{Error, Result};
pub use hull::{Containment, ConvexPolygon, HullAlgorithm, Point};
pub use labeling::{Connectivity, LabeledMask};
pub use mask_io::{BinaryMask, GrayImage};
pub use metrics::{EvalRecord, ReportRow};
pub use pipeline::PipelineConfig;
