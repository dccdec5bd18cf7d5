//! Scanline rasterization of convex polygons into binary masks.
//!
//! The filled region is closed: a pixel center on the polygon boundary is
//! foreground. That choice makes hull post-processing a superset operation,
//! since every original pixel is a lattice point of its component's hull.
//!
//! Row intersections are computed with exact integer cross-multiplication,
//! never floating point, so the scanline output agrees pointwise with
//! [`ConvexPolygon::classify`]. Numerators stay below `coord^2 * 2` and
//! comparisons below `coord^3 * 4`; with coordinates bounded by image
//! dimensions, `i64` cannot overflow.

use crate::error::{Error, Result};
use crate::hull::{ConvexPolygon, Point};
use crate::mask_io::BinaryMask;

/// A non-negative-denominator rational intersection abscissa.
#[derive(Clone, Copy)]
struct Rational {
    num: i64,
    den: i64, // > 0
}

impl Rational {
    fn of_int(x: i64) -> Self {
        Rational { num: x, den: 1 }
    }

    fn lt(self, other: Rational) -> bool {
        self.num * other.den < other.num * self.den
    }

    fn floor(self) -> i64 {
        self.num.div_euclid(self.den)
    }

    fn ceil(self) -> i64 {
        -(-self.num).div_euclid(self.den)
    }
}

/// Rasterizes a convex polygon. Every vertex must lie in
/// `[0, width) x [0, height)`; pixel `(x, y)` is set iff its center is
/// inside or on the polygon.
pub fn fill_convex(poly: &ConvexPolygon, width: u32, height: u32) -> Result<BinaryMask> {
    for v in poly.vertices() {
        if v.x < 0 || v.y < 0 || v.x >= width as i64 || v.y >= height as i64 {
            return Err(Error::VertexOutOfBounds {
                x: v.x,
                y: v.y,
                width,
                height,
            });
        }
    }

    let mut mask = BinaryMask::new(width, height);
    match poly.vertices() {
        [v] => mask.set(v.x as u32, v.y as u32, true),
        [a, b] => {
            for p in segment_lattice_points(*a, *b) {
                mask.set(p.x as u32, p.y as u32, true);
            }
        }
        ring => {
            let y_min = ring.iter().map(|v| v.y).min().unwrap();
            let y_max = ring.iter().map(|v| v.y).max().unwrap();
            let n = ring.len();
            for y in y_min..=y_max {
                let mut lo: Option<Rational> = None;
                let mut hi: Option<Rational> = None;
                let mut take = |x: Rational| {
                    if lo.is_none_or(|cur| x.lt(cur)) {
                        lo = Some(x);
                    }
                    if hi.is_none_or(|cur| cur.lt(x)) {
                        hi = Some(x);
                    }
                };
                for i in 0..n {
                    let a = ring[i];
                    let b = ring[(i + 1) % n];
                    if a.y == b.y {
                        if a.y == y {
                            take(Rational::of_int(a.x.min(b.x)));
                            take(Rational::of_int(a.x.max(b.x)));
                        }
                        continue;
                    }
                    let (top, bot) = if a.y < b.y { (a, b) } else { (b, a) };
                    if y < top.y || y > bot.y {
                        continue;
                    }
                    // x = top.x + (bot.x - top.x) * (y - top.y) / (bot.y - top.y)
                    let den = bot.y - top.y;
                    let num = top.x * den + (bot.x - top.x) * (y - top.y);
                    take(Rational { num, den });
                }
                // a convex polygon meets each row in one closed interval
                let (lo, hi) = (lo.unwrap(), hi.unwrap());
                for x in lo.ceil()..=hi.floor() {
                    mask.set(x as u32, y as u32, true);
                }
            }
        }
    }
    Ok(mask)
}

/// Exact lattice points on the closed segment `a..b`, via gcd stepping.
fn segment_lattice_points(a: Point, b: Point) -> Vec<Point> {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let steps = gcd(dx.abs(), dy.abs());
    if steps == 0 {
        return vec![a];
    }
    let (sx, sy) = (dx / steps, dy / steps);
    (0..=steps)
        .map(|k| Point::new(a.x + k * sx, a.y + k * sy))
        .collect()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a } else { gcd(b, a % b) }
}
