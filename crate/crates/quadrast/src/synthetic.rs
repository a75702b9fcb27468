//! Deterministic synthetic datasets for experiments and stress tests.
//!
//! Everything here is seeded and bit-reproducible. The shared extent is a
//! 2048 m square, which puts power-of-two grids at the common benchmark
//! resolutions.

use crate::geometry::{BoundingBox, Geometry, MultiPolygon, Point, Polygon, Polyline};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Extent shared by all synthetic suites: (0, 0) to (2048, 2048).
pub fn suite_extent() -> BoundingBox {
    BoundingBox::new(0.0, 0.0, 2048.0, 2048.0)
}

/// Ten long, thin park strips: axis-aligned rectangles 5.2 to 7.2 m wide
/// and 600 to 1000 m long, mutually separated by at least 24 m and kept
/// clear of the extent edges.
///
/// The proportions are deliberate. The strips are narrower than the
/// diagonal of a 10 m cell, so under the majority rule they vanish from
/// very coarse grids while staying prominent on fine ones, and their
/// multi-kilometer total perimeter gives boundary samplers plenty of
/// distinct territory.
pub fn park_suite(seed: u64) -> MultiPolygon {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let extent = suite_extent();
    let margin = 24.0;
    let gap = 24.0;
    let mut placed: Vec<(f64, f64, f64, f64)> = Vec::new();
    let mut ribbons = Vec::new();
    while ribbons.len() < 10 {
        let width = rng.gen_range(5.2..7.2);
        let length = rng.gen_range(600.0..1000.0);
        let (dx, dy) = if rng.gen_bool(0.5) {
            (length, width)
        } else {
            (width, length)
        };
        let x0 = rng.gen_range(extent.xmin + margin..extent.xmax - margin - dx);
        let y0 = rng.gen_range(extent.ymin + margin..extent.ymax - margin - dy);
        let candidate = (
            x0 - gap / 2.0,
            y0 - gap / 2.0,
            x0 + dx + gap / 2.0,
            y0 + dy + gap / 2.0,
        );
        let clash = placed.iter().any(|p| {
            candidate.0 < p.2 && p.0 < candidate.2 && candidate.1 < p.3 && p.1 < candidate.3
        });
        if clash {
            continue;
        }
        placed.push(candidate);
        ribbons.push(
            Polygon::new(
                vec![
                    Point::new(x0, y0),
                    Point::new(x0 + dx, y0),
                    Point::new(x0 + dx, y0 + dy),
                    Point::new(x0, y0 + dy),
                    Point::new(x0, y0),
                ],
                vec![],
            )
            .expect("axis-aligned rectangle is always a valid ring"),
        );
    }
    MultiPolygon::new(ribbons).expect("ten ribbons were just placed")
}

/// Many-vertex star-shaped blobs: `count` polygons of `vertices` vertices
/// each, built from a radial profile with two sine harmonics so every ring
/// is simple by construction. Blobs may overlap each other but stay inside
/// the suite extent.
pub fn dense_polygon_suite(count: usize, vertices: usize, seed: u64) -> Vec<Geometry> {
    assert!(vertices >= 8, "blobs need enough vertices to stay simple");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let extent = suite_extent();
    (0..count)
        .map(|_| {
            let base_r = rng.gen_range(80.0..260.0);
            // Radial profile peaks at 1.4 * base_r.
            let max_r = base_r * 1.4 + 4.0;
            let cx = rng.gen_range(extent.xmin + max_r..extent.xmax - max_r);
            let cy = rng.gen_range(extent.ymin + max_r..extent.ymax - max_r);
            let phase1 = rng.gen_range(0.0..std::f64::consts::TAU);
            let phase2 = rng.gen_range(0.0..std::f64::consts::TAU);
            let mut ring: Vec<Point> = (0..vertices)
                .map(|k| {
                    let theta = k as f64 / vertices as f64 * std::f64::consts::TAU;
                    let r = base_r
                        * (1.0
                            + 0.25 * (3.0 * theta + phase1).sin()
                            + 0.15 * (7.0 * theta + phase2).sin());
                    Point::new(cx + r * theta.cos(), cy + r * theta.sin())
                })
                .collect();
            ring.push(ring[0]);
            let poly = Polygon::new(ring, vec![]).expect("radial profile stays positive");
            Geometry::MultiPolygon(MultiPolygon::new(vec![poly]).unwrap())
        })
        .collect()
}

/// Random-walk trajectories: `count` polylines of 2 to `max_points`
/// vertices, clamped to the suite extent.
pub fn trajectories(count: usize, max_points: usize, seed: u64) -> Vec<Geometry> {
    assert!(max_points >= 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let extent = suite_extent();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.gen_range(2..=max_points);
        let mut x = rng.gen_range(extent.xmin..extent.xmax);
        let mut y = rng.gen_range(extent.ymin..extent.ymax);
        let mut heading = rng.gen_range(0.0..std::f64::consts::TAU);
        let mut verts: Vec<Point> = vec![Point::new(x, y)];
        for _ in 1..n {
            heading += rng.gen_range(-0.6..0.6);
            let step = rng.gen_range(5.0..50.0);
            x = (x + step * heading.cos()).clamp(extent.xmin, extent.xmax - 1e-6);
            y = (y + step * heading.sin()).clamp(extent.ymin, extent.ymax - 1e-6);
            let p = Point::new(x, y);
            if *verts.last().unwrap() != p {
                verts.push(p);
            }
        }
        if verts.len() < 2 {
            continue;
        }
        out.push(Geometry::Polyline(
            Polyline::new(verts).expect("duplicates were filtered"),
        ));
    }
    out
}
