//! Exact-arithmetic 2-D convex hulls of integer point sets.
//!
//! Two independent constructions are shipped, monotone chain and quickhull,
//! so that each can serve as the other's oracle. Every orientation test is
//! an exact `i64` cross product; coordinates stay within image dimensions
//! (at most a few thousand), so 64-bit intermediates cannot overflow.
//!
//! Orientation convention, fixed for the whole crate: in the y-down image
//! coordinate system, `cross(b - a, c - a) > 0` is a left turn. Hull
//! vertices are stored counter-clockwise under that convention, starting
//! from the lexicographically smallest vertex (x first, then y), with no
//! three stored vertices collinear.

use crate::error::{Error, Result};

/// An integer lattice point (pixel center).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub fn new(x: i64, y: i64) -> Self {
        Point { x, y }
    }
}

/// Exact orientation of `c` relative to the directed line `a -> b`:
/// positive = left turn, zero = collinear, negative = right turn.
#[inline]
pub fn cross(a: Point, b: Point, c: Point) -> i64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

/// Where a query point sits relative to a convex polygon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Containment {
    Inside,
    OnBoundary,
    Outside,
}

/// Hull construction to use where the caller has a choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HullAlgorithm {
    #[default]
    MonotoneChain,
    Quickhull,
}

impl HullAlgorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            HullAlgorithm::MonotoneChain => "monotone-chain",
            HullAlgorithm::Quickhull => "quickhull",
        }
    }
}

impl std::str::FromStr for HullAlgorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "monotone-chain" | "monotone_chain" => Ok(HullAlgorithm::MonotoneChain),
            "quickhull" => Ok(HullAlgorithm::Quickhull),
            other => Err(format!("unknown hull algorithm {other:?}")),
        }
    }
}

/// A convex polygon in canonical form: 1 vertex (point), 2 (segment) or at
/// least 3 with strict left turns everywhere, starting at the lexicographic
/// minimum. All vertices are distinct input points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
}

impl ConvexPolygon {
    /// Wraps an already-canonical vertex ring. Invariants are checked in
    /// debug builds only; the two hull constructors uphold them.
    fn from_canonical(vertices: Vec<Point>) -> Self {
        debug_assert!(!vertices.is_empty());
        debug_assert!(vertices.iter().min() == Some(&vertices[0]));
        if vertices.len() >= 3 {
            let n = vertices.len();
            for i in 0..n {
                debug_assert!(
                    cross(vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]) > 0,
                    "non-strict turn in hull ring"
                );
            }
        }
        ConvexPolygon { vertices }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Exact point location using integer cross products only.
    pub fn classify(&self, p: Point) -> Containment {
        match self.vertices.as_slice() {
            [v] => {
                if *v == p {
                    Containment::OnBoundary
                } else {
                    Containment::Outside
                }
            }
            [a, b] => {
                if on_segment(*a, *b, p) {
                    Containment::OnBoundary
                } else {
                    Containment::Outside
                }
            }
            ring => {
                let n = ring.len();
                let mut boundary = false;
                for i in 0..n {
                    match cross(ring[i], ring[(i + 1) % n], p) {
                        c if c < 0 => return Containment::Outside,
                        0 => boundary = true,
                        _ => {}
                    }
                }
                // a zero cross with every other edge strictly positive pins
                // the point onto that edge's segment
                if boundary {
                    Containment::OnBoundary
                } else {
                    Containment::Inside
                }
            }
        }
    }

    /// True unless the point is strictly outside.
    pub fn contains(&self, p: Point) -> bool {
        self.classify(p) != Containment::Outside
    }

    pub fn bounding_box(&self) -> (Point, Point) {
        let min_x = self.vertices.iter().map(|v| v.x).min().unwrap();
        let max_x = self.vertices.iter().map(|v| v.x).max().unwrap();
        let min_y = self.vertices.iter().map(|v| v.y).min().unwrap();
        let max_y = self.vertices.iter().map(|v| v.y).max().unwrap();
        (Point::new(min_x, min_y), Point::new(max_x, max_y))
    }
}

/// True iff `p` lies on the closed segment `a..b`.
fn on_segment(a: Point, b: Point, p: Point) -> bool {
    cross(a, b, p) == 0
        && p.x >= a.x.min(b.x)
        && p.x <= a.x.max(b.x)
        && p.y >= a.y.min(b.y)
        && p.y <= a.y.max(b.y)
}

fn sorted_dedup(points: &[Point]) -> Result<Vec<Point>> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    Ok(pts)
}

/// Convex hull by Andrew's monotone chain. Collinear boundary points are
/// excluded, so the vertex set is minimal.
pub fn monotone_chain(points: &[Point]) -> Result<ConvexPolygon> {
    let pts = sorted_dedup(points)?;
    if pts.len() <= 2 {
        return Ok(ConvexPolygon::from_canonical(pts));
    }

    let mut lower: Vec<Point> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    // the sorted scan starts at the lexicographic minimum already
    Ok(ConvexPolygon::from_canonical(lower))
}

/// Convex hull by quickhull: recursive farthest-point partitioning.
/// Same contract and canonical output as [`monotone_chain`].
pub fn quickhull(points: &[Point]) -> Result<ConvexPolygon> {
    let pts = sorted_dedup(points)?;
    if pts.len() <= 2 {
        return Ok(ConvexPolygon::from_canonical(pts));
    }

    // sorted_dedup puts the lexicographic extremes at the ends
    let a = pts[0];
    let b = pts[pts.len() - 1];
    let below: Vec<Point> = pts
        .iter()
        .copied()
        .filter(|&p| cross(a, b, p) < 0)
        .collect();
    let above: Vec<Point> = pts
        .iter()
        .copied()
        .filter(|&p| cross(a, b, p) > 0)
        .collect();

    let mut ring = vec![a];
    expand(&below, a, b, &mut ring);
    ring.push(b);
    expand(&above, b, a, &mut ring);
    Ok(ConvexPolygon::from_canonical(ring))
}

/// Emits, in ring order, the hull vertices strictly outside the directed
/// edge `u -> v` (the side with negative cross).
fn expand(outside: &[Point], u: Point, v: Point, ring: &mut Vec<Point>) {
    if outside.is_empty() {
        return;
    }
    // farthest from the line u-v; ties broken lexicographically so the
    // recursion is deterministic
    let far = outside
        .iter()
        .copied()
        .min_by(|&p, &q| cross(u, v, p).cmp(&cross(u, v, q)).then(p.cmp(&q)))
        .unwrap();
    let left: Vec<Point> = outside
        .iter()
        .copied()
        .filter(|&p| cross(u, far, p) < 0)
        .collect();
    let right: Vec<Point> = outside
        .iter()
        .copied()
        .filter(|&p| cross(far, v, p) < 0)
        .collect();
    expand(&left, u, far, ring);
    ring.push(far);
    expand(&right, far, v, ring);
}

/// Hull via the configured algorithm.
pub fn hull(points: &[Point], algorithm: HullAlgorithm) -> Result<ConvexPolygon> {
    match algorithm {
        HullAlgorithm::MonotoneChain => monotone_chain(points),
        HullAlgorithm::Quickhull => quickhull(points),
    }
}
