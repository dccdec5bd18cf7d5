//! Connected-component labeling and boundary extraction.
//!
//! Labeling uses the classic two-pass union-find scheme. The first pass
//! assigns provisional labels and records equivalences; the second pass
//! renumbers roots in raster order of each component's first pixel, so the
//! same mask always yields the same `LabeledMask` byte for byte.
//!
//! Boundary pixels are defined with the 4-neighborhood regardless of the
//! labeling connectivity: a component pixel is on the boundary if it touches
//! the image border or has a 4-neighbor outside its component. This is the
//! standard outer boundary, and it spans the component's convex hull (every
//! hull vertex of the pixel set is itself a boundary pixel).

use crate::error::{Error, Result};
use crate::hull::Point;
use crate::mask_io::BinaryMask;

/// Pixel adjacency rule used to form components.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Connectivity {
    Four,
    /// Diagonal neighbors connect. The default: thin diagonal structures in
    /// upsampled model outputs stay one component instead of many slivers.
    #[default]
    Eight,
}

impl Connectivity {
    pub fn as_str(self) -> &'static str {
        match self {
            Connectivity::Four => "four",
            Connectivity::Eight => "eight",
        }
    }
}

impl std::str::FromStr for Connectivity {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "four" | "4" => Ok(Connectivity::Four),
            "eight" | "8" => Ok(Connectivity::Eight),
            other => Err(format!(
                "unknown connectivity `{other}` (expected `four` or `eight`)"
            )),
        }
    }
}

/// Per-pixel component ids: 0 is background, components are 1..=n_components,
/// numbered in raster order of each component's first pixel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledMask {
    width: u32,
    height: u32,
    labels: Vec<u32>,
    n_components: u32,
}

impl LabeledMask {
    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn n_components(&self) -> u32 {
        self.n_components
    }

    /// Component id at `(x, y)`; 0 means background.
    pub fn label(&self, x: u32, y: u32) -> u32 {
        assert!(
            x < self.width && y < self.height,
            "pixel ({x},{y}) out of bounds"
        );
        self.labels[(y as usize) * (self.width as usize) + x as usize]
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// Number of pixels carrying each id, indexed by `id - 1`.
    pub fn component_areas(&self) -> Vec<u64> {
        let mut areas = vec![0u64; self.n_components as usize];
        for &l in &self.labels {
            if l > 0 {
                areas[(l - 1) as usize] += 1;
            }
        }
        areas
    }
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new() -> Self {
        UnionFind { parent: Vec::new() }
    }

    fn make(&mut self) -> u32 {
        let id = self.parent.len() as u32;
        self.parent.push(id);
        id
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        // root toward the smaller id keeps first-pixel order intact
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.parent[hi as usize] = lo;
    }
}

/// Labels connected components of the foreground. Deterministic: ids follow
/// the raster order of each component's topmost-then-leftmost pixel.
pub fn label(mask: &BinaryMask, conn: Connectivity) -> LabeledMask {
    let (w, h) = (mask.width() as usize, mask.height() as usize);
    let mut provisional = vec![0u32; w * h]; // provisional id + 1, 0 = background
    let mut uf = UnionFind::new();

    for y in 0..h {
        for x in 0..w {
            if !mask.get(x as u32, y as u32) {
                continue;
            }
            // scan already-visited neighbors: W, NW, N, NE
            let mut merged: Option<u32> = None;
            let mut consider = |px: usize, py: usize, uf: &mut UnionFind| {
                let p = provisional[py * w + px];
                if p == 0 {
                    return;
                }
                match merged {
                    None => merged = Some(p - 1),
                    Some(m) => uf.union(m, p - 1),
                }
            };
            if x > 0 {
                consider(x - 1, y, &mut uf);
            }
            if y > 0 {
                if conn == Connectivity::Eight && x > 0 {
                    consider(x - 1, y - 1, &mut uf);
                }
                consider(x, y - 1, &mut uf);
                if conn == Connectivity::Eight && x + 1 < w {
                    consider(x + 1, y - 1, &mut uf);
                }
            }
            let id = match merged {
                Some(m) => m,
                None => uf.make(),
            };
            provisional[y * w + x] = id + 1;
        }
    }

    // renumber roots in raster order of first occurrence
    let mut final_of_root = vec![0u32; uf.parent.len()];
    let mut labels = vec![0u32; w * h];
    let mut next = 0u32;
    for (i, &p) in provisional.iter().enumerate() {
        if p == 0 {
            continue;
        }
        let root = uf.find(p - 1) as usize;
        if final_of_root[root] == 0 {
            next += 1;
            final_of_root[root] = next;
        }
        labels[i] = final_of_root[root];
    }

    LabeledMask {
        width: mask.width(),
        height: mask.height(),
        labels,
        n_components: next,
    }
}

/// Pixels of component `id` that touch the image border or have a 4-neighbor
/// outside the component, in raster order.
pub fn boundary_pixels(labeled: &LabeledMask, id: u32) -> Result<Vec<Point>> {
    if id == 0 || id > labeled.n_components {
        return Err(Error::ComponentId {
            id,
            max: labeled.n_components,
        });
    }
    let mut out = Vec::new();
    collect_boundary(labeled, id, &mut out);
    Ok(out)
}

/// Boundary point sets for all components at once, indexed by `id - 1`.
/// One pass per component over the label grid keeps this simple; masks are
/// small enough that the pipeline cost is dominated by filling anyway.
pub(crate) fn boundary_pixels_all(labeled: &LabeledMask) -> Vec<Vec<Point>> {
    let n = labeled.n_components as usize;
    let (w, h) = (labeled.width, labeled.height);
    let mut out = vec![Vec::new(); n];
    for y in 0..h {
        for x in 0..w {
            let l = labeled.label(x, y);
            if l > 0 && is_boundary(labeled, x, y, l) {
                out[(l - 1) as usize].push(Point::new(x as i64, y as i64));
            }
        }
    }
    out
}

fn collect_boundary(labeled: &LabeledMask, id: u32, out: &mut Vec<Point>) {
    for y in 0..labeled.height {
        for x in 0..labeled.width {
            if labeled.label(x, y) == id && is_boundary(labeled, x, y, id) {
                out.push(Point::new(x as i64, y as i64));
            }
        }
    }
}

fn is_boundary(labeled: &LabeledMask, x: u32, y: u32, id: u32) -> bool {
    if x == 0 || y == 0 || x + 1 == labeled.width || y + 1 == labeled.height {
        return true;
    }
    labeled.label(x - 1, y) != id
        || labeled.label(x + 1, y) != id
        || labeled.label(x, y - 1) != id
        || labeled.label(x, y + 1) != id
}
