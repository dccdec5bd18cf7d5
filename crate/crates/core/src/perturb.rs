//! Seeded perturbations: Gaussian image noise, synthetic convex components,
//! and subtractive mask degradation, plus the experiment driver that pairs
//! them into a report.
//!
//! Everything here is a pure function of its inputs and a 64-bit seed. The
//! generator is ChaCha12 and normal variates come from the ziggurat sampler,
//! both pinned by the dependency versions, so outputs are bit-reproducible
//! across platforms. Batch drivers derive per-trial seeds as
//! `seed ^ trial_index`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::hull::{self, ConvexPolygon, HullAlgorithm, Point};
use crate::labeling::{self, Connectivity};
use crate::mask_io::{BinaryMask, GrayImage};
use crate::metrics::{self, EvalRecord, ReportRow};
use crate::pipeline::PipelineConfig;
use crate::raster;

/// Default noise level for generated noisy test sets.
pub const DEFAULT_NOISE_STD: f64 = 0.28;

/// The raw normal(0, std²) sample stream used by [`add_gaussian_noise`],
/// exposed so its statistics can be checked before any clamping.
pub fn noise_samples(std: f64, seed: u64) -> Result<impl Iterator<Item = f64>> {
    if std < 0.0 || !std.is_finite() {
        return Err(Error::NegativeStd(std));
    }
    let dist = Normal::new(0.0, std).map_err(|_| Error::NegativeStd(std))?;
    let rng = ChaCha12Rng::seed_from_u64(seed);
    Ok(dist.sample_iter(rng))
}

/// Adds independent normal(0, std²) noise to every intensity, then clamps to
/// [0, 1]. Intensities are normalized, so std is on the 0..1 scale; the
/// clamp keeps the output a valid image at the cost of biasing pixels near
/// the ends of the range.
pub fn add_gaussian_noise(image: &GrayImage, std: f64, seed: u64) -> Result<GrayImage> {
    let samples = noise_samples(std, seed)?;
    let data: Vec<f32> = image
        .data()
        .iter()
        .zip(samples)
        .map(|(&v, n)| (v as f64 + n).clamp(0.0, 1.0) as f32)
        .collect();
    GrayImage::from_data(image.width(), image.height(), data)
}

/// Shape family for synthetic components.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SynthShape {
    #[default]
    Ellipse,
    RandomConvexPolygon,
}

impl SynthShape {
    pub fn as_str(self) -> &'static str {
        match self {
            SynthShape::Ellipse => "ellipse",
            SynthShape::RandomConvexPolygon => "polygon",
        }
    }
}

impl std::str::FromStr for SynthShape {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "ellipse" => Ok(SynthShape::Ellipse),
            "polygon" | "random-convex-polygon" => Ok(SynthShape::RandomConvexPolygon),
            other => Err(format!(
                "unknown shape `{other}` (expected `ellipse` or `polygon`)"
            )),
        }
    }
}

/// Recipe for a synthetic mask of convex components. `size_range` bounds the
/// semi-extent of each component in pixels (inclusive), so a component fits
/// in a (2s+1)-square. Hulls of distinct components never touch.
#[derive(Clone, Copy, Debug)]
pub struct SynthSpec {
    pub shape: SynthShape,
    pub size_range: (u32, u32),
    pub count_per_image: u32,
    pub width: u32,
    pub height: u32,
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        SynthSpec {
            shape: SynthShape::Ellipse,
            size_range: (4, 10),
            count_per_image: 3,
            width: 64,
            height: 64,
            seed: 7,
        }
    }
}

/// Subtractive degradation recipe. With `speckle_prob` at its default 0 the
/// output only ever loses foreground pixels; speckle adds background noise
/// pixels and voids any improvement guarantee.
#[derive(Clone, Copy, Debug)]
pub struct DegradeSpec {
    pub hole_count: u32,
    /// Inclusive radius bounds for punched holes.
    pub hole_radius_range: (u32, u32),
    pub boundary_erosion_prob: f64,
    pub pixel_dropout_prob: f64,
    pub speckle_prob: f64,
    pub seed: u64,
}

impl Default for DegradeSpec {
    fn default() -> Self {
        DegradeSpec {
            hole_count: 1,
            hole_radius_range: (1, 2),
            boundary_erosion_prob: 0.0,
            pixel_dropout_prob: 0.0,
            speckle_prob: 0.0,
            seed: 11,
        }
    }
}

const PLACEMENT_ATTEMPTS: u32 = 200;

/// Generates `count_per_image` convex components with pairwise disjoint,
/// non-adjacent hulls, plus each component's hull. Every component equals
/// the lattice points of its own hull, so the hull pipeline is a no-op on
/// the result. Fails with a packing error when a component cannot be placed
/// within the attempt budget.
pub fn gen_convex_mask(spec: &SynthSpec) -> Result<(BinaryMask, Vec<ConvexPolygon>)> {
    let lo = spec.size_range.0.max(1);
    let hi = spec.size_range.1.max(1);
    let (lo, hi) = (lo.min(hi), lo.max(hi));
    let mut rng = ChaCha12Rng::seed_from_u64(spec.seed);
    let mut mask = BinaryMask::new(spec.width, spec.height);
    let mut hulls: Vec<ConvexPolygon> = Vec::new();
    let mut boxes: Vec<(Point, Point)> = Vec::new();

    for placed in 0..spec.count_per_image {
        let mut done = false;
        for _ in 0..PLACEMENT_ATTEMPTS {
            let Some(pixels) =
                attempt_component(spec.shape, lo, hi, spec.width, spec.height, &mut rng)
            else {
                continue;
            };
            let bbox = pixel_bbox(&pixels);
            // a 2-pixel gap keeps components non-adjacent under eight-connectivity
            if boxes.iter().any(|other| boxes_closer_than(bbox, *other, 2)) {
                continue;
            }
            for &(x, y) in &pixels {
                mask.set(x, y, true);
            }
            let pts: Vec<Point> = pixels
                .iter()
                .map(|&(x, y)| Point::new(x as i64, y as i64))
                .collect();
            hulls.push(hull::hull(&pts, HullAlgorithm::MonotoneChain)?);
            boxes.push(bbox);
            done = true;
            break;
        }
        if !done {
            return Err(Error::Packing {
                placed,
                requested: spec.count_per_image,
                retries: PLACEMENT_ATTEMPTS,
            });
        }
    }
    Ok((mask, hulls))
}

fn attempt_component(
    shape: SynthShape,
    lo: u32,
    hi: u32,
    width: u32,
    height: u32,
    rng: &mut ChaCha12Rng,
) -> Option<Vec<(u32, u32)>> {
    match shape {
        SynthShape::Ellipse => {
            let a = rng.random_range(lo..=hi);
            let b = rng.random_range(lo..=hi);
            if 2 * a + 1 > width || 2 * b + 1 > height {
                return None;
            }
            let cx = rng.random_range(a..=width - 1 - a);
            let cy = rng.random_range(b..=height - 1 - b);
            Some(ellipse_pixels(cx, cy, a, b))
        }
        SynthShape::RandomConvexPolygon => {
            let s = rng.random_range(lo..=hi);
            if 2 * s + 1 > width || 2 * s + 1 > height {
                return None;
            }
            let cx = rng.random_range(s..=width - 1 - s) as i64;
            let cy = rng.random_range(s..=height - 1 - s) as i64;
            let k = rng.random_range(5..=12);
            let s = s as i64;
            let pts: Vec<Point> = (0..k)
                .map(|_| Point::new(cx + rng.random_range(-s..=s), cy + rng.random_range(-s..=s)))
                .collect();
            let poly = hull::hull(&pts, HullAlgorithm::MonotoneChain).ok()?;
            let filled = raster::fill_convex(&poly, width, height).ok()?;
            // thin shapes can rasterize to split or trivial lattice sets
            if filled.count_foreground() < 5
                || labeling::label(&filled, Connectivity::Eight).n_components() != 1
            {
                return None;
            }
            Some(filled.foreground_pixels().collect())
        }
    }
}

/// Lattice points of the closed ellipse with integer center and semi-axes,
/// tested exactly: dx²·b² + dy²·a² ≤ a²·b².
fn ellipse_pixels(cx: u32, cy: u32, a: u32, b: u32) -> Vec<(u32, u32)> {
    let (cx, cy, a, b) = (cx as i64, cy as i64, a as i64, b as i64);
    let mut out = Vec::new();
    for y in cy - b..=cy + b {
        for x in cx - a..=cx + a {
            let (dx, dy) = (x - cx, y - cy);
            if dx * dx * b * b + dy * dy * a * a <= a * a * b * b {
                out.push((x as u32, y as u32));
            }
        }
    }
    out
}

fn pixel_bbox(pixels: &[(u32, u32)]) -> (Point, Point) {
    let min_x = pixels.iter().map(|p| p.0).min().unwrap() as i64;
    let max_x = pixels.iter().map(|p| p.0).max().unwrap() as i64;
    let min_y = pixels.iter().map(|p| p.1).min().unwrap() as i64;
    let max_y = pixels.iter().map(|p| p.1).max().unwrap() as i64;
    (Point::new(min_x, min_y), Point::new(max_x, max_y))
}

fn boxes_closer_than(a: (Point, Point), b: (Point, Point), gap: i64) -> bool {
    let x_gap = (b.0.x - a.1.x).max(a.0.x - b.1.x);
    let y_gap = (b.0.y - a.1.y).max(a.0.y - b.1.y);
    x_gap.max(y_gap) < gap
}

/// Applies the degradations in a fixed order: holes, boundary erosion, pixel
/// dropout, then (if enabled) additive speckle. Hole centers prefer pixels
/// whose whole (r+1)-disk is still foreground, so holes model interior false
/// negatives whenever the mask is thick enough to contain one.
pub fn degrade(mask: &BinaryMask, spec: &DegradeSpec) -> BinaryMask {
    let mut rng = ChaCha12Rng::seed_from_u64(spec.seed);
    let mut out = mask.clone();
    let (r_lo, r_hi) = spec.hole_radius_range;
    let (r_lo, r_hi) = (r_lo.min(r_hi), r_lo.max(r_hi));

    for _ in 0..spec.hole_count {
        let r = rng.random_range(r_lo..=r_hi) as i64;
        let supported: Vec<(u32, u32)> = out
            .foreground_pixels()
            .filter(|&(x, y)| disk_supported(&out, x, y, r + 1))
            .collect();
        let candidates = if supported.is_empty() {
            out.foreground_pixels().collect()
        } else {
            supported
        };
        if candidates.is_empty() {
            break;
        }
        let (cx, cy) = candidates[rng.random_range(0..candidates.len())];
        clear_disk(&mut out, cx, cy, r);
    }

    if spec.boundary_erosion_prob > 0.0 {
        let labeled = labeling::label(&out, Connectivity::Eight);
        let mut doomed = Vec::new();
        for boundary in labeling::boundary_pixels_all(&labeled) {
            for p in boundary {
                if rng.random::<f64>() < spec.boundary_erosion_prob {
                    doomed.push(p);
                }
            }
        }
        for p in doomed {
            out.set(p.x as u32, p.y as u32, false);
        }
    }

    if spec.pixel_dropout_prob > 0.0 {
        let foreground: Vec<(u32, u32)> = out.foreground_pixels().collect();
        for (x, y) in foreground {
            if rng.random::<f64>() < spec.pixel_dropout_prob {
                out.set(x, y, false);
            }
        }
    }

    if spec.speckle_prob > 0.0 {
        for y in 0..out.height() {
            for x in 0..out.width() {
                if !out.get(x, y) && rng.random::<f64>() < spec.speckle_prob {
                    out.set(x, y, true);
                }
            }
        }
    }

    out
}

fn disk_supported(mask: &BinaryMask, cx: u32, cy: u32, r: i64) -> bool {
    let (cx, cy) = (cx as i64, cy as i64);
    for dy in -r..=r {
        for dx in -r..=r {
            if dx * dx + dy * dy > r * r {
                continue;
            }
            let (x, y) = (cx + dx, cy + dy);
            if x < 0
                || y < 0
                || x >= mask.width() as i64
                || y >= mask.height() as i64
                || !mask.get(x as u32, y as u32)
            {
                return false;
            }
        }
    }
    true
}

fn clear_disk(mask: &mut BinaryMask, cx: u32, cy: u32, r: i64) {
    let (cx, cy) = (cx as i64, cy as i64);
    for dy in -r..=r {
        for dx in -r..=r {
            if dx * dx + dy * dy > r * r {
                continue;
            }
            let (x, y) = (cx + dx, cy + dy);
            if x >= 0 && y >= 0 && x < mask.width() as i64 && y < mask.height() as i64 {
                mask.set(x as u32, y as u32, false);
            }
        }
    }
}

/// Runs `trials` rounds of generate-degrade-evaluate with per-trial seeds
/// `seed ^ trial_index` and folds the records into one report row. While the
/// degradation is purely subtractive (no speckle), each trial's ground truth
/// is convex and contains its prediction, so hull post-processing can only
/// add true positives; any trial where the with-score drops below the
/// without-score is reported as an error.
pub fn improvement_experiment(
    synth: &SynthSpec,
    deg: &DegradeSpec,
    trials: u32,
    config: &PipelineConfig,
) -> Result<ReportRow> {
    let mut records: Vec<EvalRecord> = Vec::with_capacity(trials as usize);
    for trial in 0..trials {
        let synth_trial = SynthSpec {
            seed: synth.seed ^ trial as u64,
            ..*synth
        };
        let deg_trial = DegradeSpec {
            seed: deg.seed ^ trial as u64,
            ..*deg
        };
        let (gt, _) = gen_convex_mask(&synth_trial)?;
        let pred = degrade(&gt, &deg_trial);
        let rec = metrics::evaluate_pair(format!("trial_{trial:04}"), &pred, &gt, config)?;
        if deg_trial.speckle_prob == 0.0 && rec.dice_with < rec.dice_without {
            return Err(Error::TheoremViolation {
                trial,
                dice_without: rec.dice_without,
                dice_with: rec.dice_with,
            });
        }
        records.push(rec);
    }
    metrics::aggregate(&records, "synthetic", "-")
}
