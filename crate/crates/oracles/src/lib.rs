//! Brute-force counterparts of the production algorithms, for tests only.
//!
//! Each oracle shares no code with the implementation it checks: hulls come
//! from an O(n³) extreme-edge walk instead of monotone chain or quickhull,
//! labeling from a stack-based flood fill instead of two-pass union-find,
//! filling from per-pixel half-plane classification instead of scanlines,
//! and scores from naked counting loops. Inputs are expected to be small;
//! performance is explicitly not a goal here.
//!
//! The crate also carries the published reference report rows (four
//! encoder-decoder segmentation models, four training splits, normal and
//! noisy test sets) used to validate report arithmetic against an external
//! source of truth.

use covhuseg::hull::{Containment, Point, cross};
use covhuseg::labeling::Connectivity;
use covhuseg::mask_io::BinaryMask;

/// Convex hull by exhaustive extreme-edge search: an edge (a, b) is on the
/// hull iff every other point lies weakly to its left; the ring is walked
/// from the lexicographically smallest point taking the farthest admissible
/// endpoint, which drops collinear interior points. O(n³), returns the same
/// canonical vertex order the production algorithms promise.
pub fn brute_hull(points: &[Point]) -> Vec<Point> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    assert!(!pts.is_empty(), "hull of an empty point set");
    if pts.len() == 1 {
        return pts;
    }

    let start = pts[0];
    let mut ring = vec![start];
    let mut current = start;
    loop {
        let mut next: Option<Point> = None;
        'candidates: for &b in &pts {
            if b == current {
                continue;
            }
            for &p in &pts {
                if p == current || p == b {
                    continue;
                }
                let c = cross(current, b, p);
                if c < 0 {
                    continue 'candidates;
                }
                if c == 0 && !between(current, b, p) {
                    // collinear but beyond b: b is not the extreme endpoint
                    continue 'candidates;
                }
            }
            let sq_dist = |p: Point| -> i64 {
                let (dx, dy) = (p.x - current.x, p.y - current.y);
                dx * dx + dy * dy
            };
            let farther = |cand: Point, best: Point| sq_dist(cand) > sq_dist(best);
            match next {
                None => next = Some(b),
                Some(best) if farther(b, best) => next = Some(b),
                _ => {}
            }
        }
        let next = next.expect("non-degenerate point set must have an extreme edge");
        if next == start {
            return ring;
        }
        ring.push(next);
        current = next;
    }
}

fn between(a: Point, b: Point, p: Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Point-in-convex-polygon by testing every edge half-plane with exact
/// cross products. `ring` is a canonical hull vertex sequence.
pub fn classify_by_halfplanes(ring: &[Point], p: Point) -> Containment {
    match ring {
        [] => panic!("empty vertex ring"),
        [v] => {
            if *v == p {
                Containment::OnBoundary
            } else {
                Containment::Outside
            }
        }
        [a, b] => {
            if cross(*a, *b, p) == 0 && between(*a, *b, p) {
                Containment::OnBoundary
            } else {
                Containment::Outside
            }
        }
        _ => {
            let mut on_edge = false;
            for (i, &a) in ring.iter().enumerate() {
                let b = ring[(i + 1) % ring.len()];
                match cross(a, b, p) {
                    c if c < 0 => return Containment::Outside,
                    0 => on_edge = true,
                    _ => {}
                }
            }
            if on_edge {
                Containment::OnBoundary
            } else {
                Containment::Inside
            }
        }
    }
}

/// Rasterization oracle: classifies all `width * height` pixel centers
/// against the hull ring, one at a time.
pub fn pixelwise_fill(ring: &[Point], width: u32, height: u32) -> BinaryMask {
    let mut mask = BinaryMask::new(width, height);
    for y in 0..height {
        for x in 0..width {
            let c = classify_by_halfplanes(ring, Point::new(x as i64, y as i64));
            if c != Containment::Outside {
                mask.set(x, y, true);
            }
        }
    }
    mask
}

/// Flood-fill labeling oracle. Returns the per-pixel label grid in row-major
/// order and the component count, with components numbered in raster order
/// of their first pixel, matching the production labeler's convention.
pub fn flood_label(mask: &BinaryMask, conn: Connectivity) -> (Vec<u32>, u32) {
    let (w, h) = (mask.width() as i64, mask.height() as i64);
    let mut labels = vec![0u32; (w * h) as usize];
    let mut next = 0u32;
    let index = |x: i64, y: i64| (y * w + x) as usize;

    for sy in 0..h {
        for sx in 0..w {
            if !mask.get(sx as u32, sy as u32) || labels[index(sx, sy)] != 0 {
                continue;
            }
            next += 1;
            let mut stack = vec![(sx, sy)];
            labels[index(sx, sy)] = next;
            while let Some((x, y)) = stack.pop() {
                for dy in -1..=1i64 {
                    for dx in -1..=1i64 {
                        if (dx, dy) == (0, 0) {
                            continue;
                        }
                        if conn == Connectivity::Four && dx != 0 && dy != 0 {
                            continue;
                        }
                        let (nx, ny) = (x + dx, y + dy);
                        if nx < 0 || ny < 0 || nx >= w || ny >= h {
                            continue;
                        }
                        if mask.get(nx as u32, ny as u32) && labels[index(nx, ny)] == 0 {
                            labels[index(nx, ny)] = next;
                            stack.push((nx, ny));
                        }
                    }
                }
            }
        }
    }
    (labels, next)
}

/// Dice by direct pixel counting.
pub fn count_dice(a: &BinaryMask, b: &BinaryMask) -> f64 {
    let (inter, na, nb) = count_overlap(a, b);
    if na + nb == 0 {
        return 1.0;
    }
    2.0 * inter as f64 / (na + nb) as f64
}

/// IoU by direct pixel counting.
pub fn count_iou(a: &BinaryMask, b: &BinaryMask) -> f64 {
    let (inter, na, nb) = count_overlap(a, b);
    if na == 0 && nb == 0 {
        return 1.0;
    }
    inter as f64 / (na + nb - inter) as f64
}

fn count_overlap(a: &BinaryMask, b: &BinaryMask) -> (u64, u64, u64) {
    assert_eq!((a.width(), a.height()), (b.width(), b.height()));
    let (mut inter, mut na, mut nb) = (0u64, 0u64, 0u64);
    for y in 0..a.height() {
        for x in 0..a.width() {
            let (pa, pb) = (a.get(x, y), b.get(x, y));
            if pa {
                na += 1;
            }
            if pb {
                nb += 1;
            }
            if pa && pb {
                inter += 1;
            }
        }
    }
    (inter, na, nb)
}

/// A fully independent rendition of the hull pipeline: flood labeling,
/// border-or-exposed-4-neighbor boundaries, extreme-edge hulls, per-pixel
/// fills, all unioned with the original pixels.
pub fn reference_pipeline(mask: &BinaryMask, conn: Connectivity) -> BinaryMask {
    let (labels, n) = flood_label(mask, conn);
    let (w, h) = (mask.width(), mask.height());
    let at = |x: u32, y: u32| labels[(y * w + x) as usize];
    let mut out = mask.clone();
    for id in 1..=n {
        let mut boundary = Vec::new();
        for y in 0..h {
            for x in 0..w {
                if at(x, y) != id {
                    continue;
                }
                let on_border = x == 0 || y == 0 || x + 1 == w || y + 1 == h;
                let exposed = on_border
                    || at(x - 1, y) != id
                    || at(x + 1, y) != id
                    || at(x, y - 1) != id
                    || at(x, y + 1) != id;
                if exposed {
                    boundary.push(Point::new(x as i64, y as i64));
                }
            }
        }
        let ring = brute_hull(&boundary);
        out.union_with(&pixelwise_fill(&ring, w, h));
    }
    out
}

/// One row of the published with/without report tables.
#[derive(Clone, Copy, Debug)]
pub struct ReferenceRow {
    pub model: &'static str,
    pub split: &'static str,
    /// Scores from the noisy test set rather than the normal one.
    pub noisy: bool,
    pub without: f64,
    pub with: f64,
    pub increase: f64,
    pub increase_pct: f64,
}

/// The 32 published rows: 4 models x 4 splits, on the normal and noisy test
/// sets. `increase` and `increase_pct` are the printed columns, carried
/// verbatim so arithmetic checks can compare against them.
pub const REFERENCE_ROWS: [ReferenceRow; 32] = [
    row("unet", "A", false, 0.835, 0.841, 0.006, 0.74),
    row("unet", "B", false, 0.858, 0.863, 0.005, 0.55),
    row("unet", "C", false, 0.843, 0.850, 0.007, 0.78),
    row("unet", "D", false, 0.848, 0.853, 0.005, 0.60),
    row("unet++", "A", false, 0.837, 0.842, 0.006, 0.67),
    row("unet++", "B", false, 0.851, 0.859, 0.008, 0.90),
    row("unet++", "C", false, 0.837, 0.844, 0.007, 0.79),
    row("unet++", "D", false, 0.853, 0.858, 0.005, 0.62),
    row("unet3+", "A", false, 0.708, 0.720, 0.012, 1.69),
    row("unet3+", "B", false, 0.787, 0.800, 0.013, 1.66),
    row("unet3+", "C", false, 0.715, 0.733, 0.018, 2.49),
    row("unet3+", "D", false, 0.789, 0.797, 0.008, 1.05),
    row("transunet", "A", false, 0.550, 0.581, 0.032, 5.74),
    row("transunet", "B", false, 0.687, 0.711, 0.023, 3.42),
    row("transunet", "C", false, 0.569, 0.595, 0.026, 4.56),
    row("transunet", "D", false, 0.682, 0.702, 0.020, 2.89),
    row("unet", "A", true, 0.800, 0.809, 0.010, 1.20),
    row("unet", "B", true, 0.821, 0.828, 0.008, 0.93),
    row("unet", "C", true, 0.807, 0.818, 0.011, 1.35),
    row("unet", "D", true, 0.815, 0.822, 0.008, 0.97),
    row("unet++", "A", true, 0.797, 0.807, 0.009, 1.15),
    row("unet++", "B", true, 0.812, 0.823, 0.012, 1.46),
    row("unet++", "C", true, 0.801, 0.812, 0.011, 1.32),
    row("unet++", "D", true, 0.825, 0.834, 0.009, 1.06),
    row("unet3+", "A", true, 0.579, 0.593, 0.014, 2.42),
    row("unet3+", "B", true, 0.697, 0.717, 0.020, 2.87),
    row("unet3+", "C", true, 0.571, 0.595, 0.024, 4.29),
    row("unet3+", "D", true, 0.696, 0.711, 0.016, 2.23),
    row("transunet", "A", true, 0.260, 0.287, 0.027, 10.34),
    row("transunet", "B", true, 0.481, 0.514, 0.033, 6.76),
    row("transunet", "C", true, 0.287, 0.317, 0.030, 10.40),
    row("transunet", "D", true, 0.550, 0.581, 0.031, 5.56),
];

const fn row(
    model: &'static str,
    split: &'static str,
    noisy: bool,
    without: f64,
    with: f64,
    increase: f64,
    increase_pct: f64,
) -> ReferenceRow {
    ReferenceRow {
        model,
        split,
        noisy,
        without,
        with,
        increase,
        increase_pct,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(coords: &[(i64, i64)]) -> Vec<Point> {
        coords.iter().map(|&(x, y)| Point::new(x, y)).collect()
    }

    #[test]
    fn brute_hull_of_unit_square_is_canonical() {
        let ring = brute_hull(&pts(&[(0, 0), (1, 1), (0, 1), (1, 0)]));
        assert_eq!(ring, pts(&[(0, 0), (1, 0), (1, 1), (0, 1)]));
    }

    #[test]
    fn brute_hull_collapses_collinear_points() {
        let ring = brute_hull(&pts(&[(0, 0), (1, 1), (2, 2)]));
        assert_eq!(ring, pts(&[(0, 0), (2, 2)]));
    }

    #[test]
    fn brute_hull_of_single_point() {
        assert_eq!(brute_hull(&pts(&[(5, 7), (5, 7)])), pts(&[(5, 7)]));
    }

    #[test]
    fn halfplane_classification_on_a_square() {
        let ring = pts(&[(0, 0), (2, 0), (2, 2), (0, 2)]);
        assert_eq!(
            classify_by_halfplanes(&ring, Point::new(1, 1)),
            Containment::Inside
        );
        assert_eq!(
            classify_by_halfplanes(&ring, Point::new(2, 1)),
            Containment::OnBoundary
        );
        assert_eq!(
            classify_by_halfplanes(&ring, Point::new(3, 1)),
            Containment::Outside
        );
    }

    #[test]
    fn flood_label_distinguishes_connectivity() {
        let mut m = BinaryMask::new(2, 2);
        m.set(0, 0, true);
        m.set(1, 1, true);
        assert_eq!(flood_label(&m, Connectivity::Four).1, 2);
        assert_eq!(flood_label(&m, Connectivity::Eight).1, 1);
    }

    #[test]
    fn counting_scores_by_hand() {
        let mut a = BinaryMask::new(3, 1);
        let mut b = BinaryMask::new(3, 1);
        a.set(0, 0, true);
        a.set(1, 0, true);
        b.set(1, 0, true);
        b.set(2, 0, true);
        assert_eq!(count_dice(&a, &b), 0.5);
        assert!((count_iou(&a, &b) - 1.0 / 3.0).abs() < 1e-15);
        let empty = BinaryMask::new(3, 1);
        assert_eq!(count_dice(&empty, &empty), 1.0);
        assert_eq!(count_iou(&empty, &empty), 1.0);
    }

    #[test]
    fn reference_rows_are_complete_and_in_range() {
        assert_eq!(REFERENCE_ROWS.len(), 32);
        assert_eq!(REFERENCE_ROWS.iter().filter(|r| r.noisy).count(), 16);
        for r in &REFERENCE_ROWS {
            assert!(r.without > 0.0 && r.without < 1.0);
            assert!(r.with > 0.0 && r.with < 1.0);
            assert!(r.with > r.without, "{} {} must improve", r.model, r.split);
            assert!(r.increase > 0.0 && r.increase_pct > 0.0);
        }
    }
}
