//! Randomized agreement checks between the production algorithms and their
//! brute-force oracles. Seeds are fixed, so every run covers the same
//! instances; any disagreement is a real defect, not flakiness.

use covhuseg::hull::{self, Containment, HullAlgorithm, Point};
use covhuseg::labeling::{self, Connectivity};
use covhuseg::mask_io::BinaryMask;
use covhuseg::metrics;
use covhuseg::pipeline::{self, PipelineConfig};
use covhuseg::raster;
use covhuseg_oracles as oracle;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

fn random_points(rng: &mut ChaCha12Rng, max_count: usize, coord: i64) -> Vec<Point> {
    let n = rng.random_range(1..=max_count);
    (0..n)
        .map(|_| Point::new(rng.random_range(0..coord), rng.random_range(0..coord)))
        .collect()
}

fn random_mask(rng: &mut ChaCha12Rng, w: u32, h: u32, density: f64) -> BinaryMask {
    let mut m = BinaryMask::new(w, h);
    for y in 0..h {
        for x in 0..w {
            if rng.random::<f64>() < density {
                m.set(x, y, true);
            }
        }
    }
    m
}

#[test]
fn hulls_agree_with_the_extreme_edge_oracle() {
    let mut rng = ChaCha12Rng::seed_from_u64(0xB01);
    for _ in 0..500 {
        let pts = random_points(&mut rng, 12, 64);
        let expected = oracle::brute_hull(&pts);
        let mono = hull::monotone_chain(&pts).unwrap();
        let quick = hull::quickhull(&pts).unwrap();
        assert_eq!(mono.vertices(), expected, "points {pts:?}");
        assert_eq!(quick.vertices(), expected, "points {pts:?}");
    }
}

#[test]
fn classification_agrees_with_the_halfplane_oracle() {
    let mut rng = ChaCha12Rng::seed_from_u64(0xB02);
    for _ in 0..500 {
        let pts = random_points(&mut rng, 10, 32);
        let poly = hull::monotone_chain(&pts).unwrap();
        let q = Point::new(rng.random_range(-2..34), rng.random_range(-2..34));
        assert_eq!(
            poly.classify(q),
            oracle::classify_by_halfplanes(poly.vertices(), q),
            "hull {:?} query {q:?}",
            poly.vertices()
        );
    }
}

#[test]
fn scanline_fill_agrees_with_the_pixelwise_oracle() {
    let mut rng = ChaCha12Rng::seed_from_u64(0xB03);
    for _ in 0..200 {
        let pts = random_points(&mut rng, 10, 32);
        let poly = hull::monotone_chain(&pts).unwrap();
        let fast = raster::fill_convex(&poly, 32, 32).unwrap();
        let slow = oracle::pixelwise_fill(poly.vertices(), 32, 32);
        assert_eq!(fast, slow, "hull {:?}", poly.vertices());
    }
}

#[test]
fn labeling_agrees_with_the_flood_fill_oracle() {
    let mut rng = ChaCha12Rng::seed_from_u64(0xB04);
    for trial in 0..200 {
        let density = 0.2 + 0.6 * (trial as f64 / 200.0);
        let mask = random_mask(&mut rng, 32, 32, density);
        for conn in [Connectivity::Four, Connectivity::Eight] {
            let fast = labeling::label(&mask, conn);
            let (labels, n) = oracle::flood_label(&mask, conn);
            assert_eq!(fast.n_components(), n);
            assert_eq!(fast.labels(), &labels[..]);
        }
    }
}

#[test]
fn scores_agree_with_counting_oracles() {
    let mut rng = ChaCha12Rng::seed_from_u64(0xB05);
    for _ in 0..500 {
        let da = rng.random::<f64>();
        let db = rng.random::<f64>();
        let a = random_mask(&mut rng, 16, 16, da);
        let b = random_mask(&mut rng, 16, 16, db);
        assert!((metrics::dice(&a, &b).unwrap() - oracle::count_dice(&a, &b)).abs() < 1e-12);
        assert!((metrics::iou(&a, &b).unwrap() - oracle::count_iou(&a, &b)).abs() < 1e-12);
    }
}

#[test]
fn pipeline_agrees_with_the_reference_pipeline() {
    let mut rng = ChaCha12Rng::seed_from_u64(0xB06);
    for trial in 0..100 {
        let density = 0.15 + 0.5 * (trial as f64 / 100.0);
        let mask = random_mask(&mut rng, 32, 32, density);
        for conn in [Connectivity::Four, Connectivity::Eight] {
            let config = PipelineConfig {
                connectivity: conn,
                ..PipelineConfig::default()
            };
            let fast = pipeline::covhuseg(&mask, &config).unwrap();
            let slow = oracle::reference_pipeline(&mask, conn);
            assert_eq!(fast, slow);
        }
    }
}

#[test]
fn hole_filling_matches_the_containment_oracle() {
    // disk with a punched hole: output must be exactly the hull's lattice set
    let mut disk = BinaryMask::new(16, 16);
    for y in 0..16i64 {
        for x in 0..16i64 {
            if (x - 8) * (x - 8) + (y - 8) * (y - 8) <= 36 {
                disk.set(x as u32, y as u32, true);
            }
        }
    }
    let mut holed = disk.clone();
    for (x, y) in [(7, 7), (8, 7), (7, 8), (8, 8), (9, 8), (8, 9)] {
        holed.set(x, y, false);
    }
    let out = pipeline::covhuseg(&holed, &PipelineConfig::default()).unwrap();
    assert_eq!(out, disk);

    let pts: Vec<Point> = disk
        .foreground_pixels()
        .map(|(x, y)| Point::new(x as i64, y as i64))
        .collect();
    let ring = oracle::brute_hull(&pts);
    for y in 0..16u32 {
        for x in 0..16u32 {
            let c = oracle::classify_by_halfplanes(&ring, Point::new(x as i64, y as i64));
            assert_eq!(out.get(x, y), c != Containment::Outside);
        }
    }
}

#[test]
fn quickhull_and_monotone_chain_match_on_adversarial_layouts() {
    // collinear-heavy inputs: grids, lines, and duplicated points
    let mut cases: Vec<Vec<Point>> = vec![
        (0..8).map(|i| Point::new(i, 0)).collect(),
        (0..8).map(|i| Point::new(i, i)).collect(),
        (0..8).map(|i| Point::new(0, i)).collect(),
        (0..4)
            .flat_map(|x| (0..4).map(move |y| Point::new(x, y)))
            .collect(),
        vec![Point::new(3, 3); 5],
    ];
    let mut rng = ChaCha12Rng::seed_from_u64(0xB07);
    for _ in 0..100 {
        // points restricted to a coarse sub-lattice force many collinearities
        let n = rng.random_range(1..=14);
        cases.push(
            (0..n)
                .map(|_| Point::new(rng.random_range(0..4) * 8, rng.random_range(0..4) * 8))
                .collect(),
        );
    }
    for pts in &cases {
        let expected = oracle::brute_hull(pts);
        assert_eq!(
            hull::monotone_chain(pts).unwrap().vertices(),
            expected,
            "{pts:?}"
        );
        assert_eq!(
            hull::quickhull(pts).unwrap().vertices(),
            expected,
            "{pts:?}"
        );
        assert_eq!(
            hull::hull(pts, HullAlgorithm::MonotoneChain)
                .unwrap()
                .vertices(),
            hull::hull(pts, HullAlgorithm::Quickhull)
                .unwrap()
                .vertices()
        );
    }
}
