//! Planar vector geometry and the exact point-membership predicates that
//! serve as ground truth for every raster and quadtree comparison.
//!
//! Coordinates are `f64` meters in a shared planar CRS; no geodesy happens
//! here. All membership tests are boundary-inclusive: a point lying exactly
//! on a ring or segment (within [`BOUNDARY_EPS`]) counts as contained. The
//! interior test itself is even-odd ray casting with the half-open vertex
//! rule, so the explicit boundary pre-test is what pins down edge and vertex
//! points that ray casting alone would classify arbitrarily.

use crate::error::{Error, Result};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Distance in meters below which a point counts as lying on a boundary.
pub const BOUNDARY_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Axis-aligned rectangle with strictly positive extent on both axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox {
    pub xmin: f64,
    pub ymin: f64,
    pub xmax: f64,
    pub ymax: f64,
}

impl BoundingBox {
    /// Panics unless `xmin < xmax` and `ymin < ymax`.
    pub fn new(xmin: f64, ymin: f64, xmax: f64, ymax: f64) -> Self {
        assert!(
            xmin < xmax && ymin < ymax,
            "degenerate bounding box: [{xmin}, {xmax}) x [{ymin}, {ymax})"
        );
        BoundingBox {
            xmin,
            ymin,
            xmax,
            ymax,
        }
    }

    pub fn width(&self) -> f64 {
        self.xmax - self.xmin
    }

    pub fn height(&self) -> f64 {
        self.ymax - self.ymin
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    /// Closed containment: boundary points are inside.
    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.xmin && p.x <= self.xmax && p.y >= self.ymin && p.y <= self.ymax
    }
}

/// Open polygonal chain with at least two vertices and no zero-length segment.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    vertices: Vec<Point>,
}

impl Polyline {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::Geometry(format!(
                "polyline needs at least 2 vertices, got {}",
                vertices.len()
            )));
        }
        for (i, v) in vertices.iter().enumerate() {
            if !v.x.is_finite() || !v.y.is_finite() {
                return Err(Error::Geometry(format!(
                    "polyline vertex {i} is not finite: ({}, {})",
                    v.x, v.y
                )));
            }
        }
        for (i, w) in vertices.windows(2).enumerate() {
            if w[0] == w[1] {
                return Err(Error::Geometry(format!(
                    "polyline has consecutive duplicate vertices at index {i}"
                )));
            }
        }
        Ok(Polyline { vertices })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn length(&self) -> f64 {
        self.vertices.windows(2).map(|w| w[0].distance(w[1])).sum()
    }

    /// Minimum distance from `p` to any segment of the chain.
    pub fn min_distance(&self, p: Point) -> f64 {
        self.vertices
            .windows(2)
            .map(|w| dist2_point_segment(p, w[0], w[1]))
            .fold(f64::INFINITY, f64::min)
            .sqrt()
    }

    /// True when `p` lies within `tol` meters of the chain. Panics on
    /// negative `tol`; `tol == 0` asks for exact incidence.
    pub fn within_distance(&self, p: Point, tol: f64) -> bool {
        assert!(tol >= 0.0, "negative tolerance: {tol}");
        self.min_distance(p) <= tol
    }
}

/// Simple polygon: one exterior ring and zero or more hole rings.
///
/// Rings are stored closed (first vertex repeated at the end) and
/// normalized on construction: exterior counter-clockwise, holes clockwise.
/// Each ring must be non-self-intersecting; holes are assumed to lie inside
/// the exterior and pairwise disjoint, which is not checked.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    exterior: Vec<Point>,
    holes: Vec<Vec<Point>>,
}

impl Polygon {
    pub fn new(exterior: Vec<Point>, holes: Vec<Vec<Point>>) -> Result<Self> {
        let mut exterior = exterior;
        validate_ring(&exterior).map_err(|m| Error::Geometry(format!("exterior ring: {m}")))?;
        if signed_ring_area(&exterior) == 0.0 {
            return Err(Error::Geometry("exterior ring has zero area".into()));
        }
        if signed_ring_area(&exterior) < 0.0 {
            exterior.reverse();
        }
        let mut normalized_holes = Vec::with_capacity(holes.len());
        for (i, hole) in holes.into_iter().enumerate() {
            let mut hole = hole;
            validate_ring(&hole).map_err(|m| Error::Geometry(format!("hole ring {i}: {m}")))?;
            if signed_ring_area(&hole) > 0.0 {
                hole.reverse();
            }
            normalized_holes.push(hole);
        }
        Ok(Polygon {
            exterior,
            holes: normalized_holes,
        })
    }

    /// Closed exterior ring, counter-clockwise.
    pub fn exterior(&self) -> &[Point] {
        &self.exterior
    }

    /// Closed hole rings, clockwise.
    pub fn holes(&self) -> &[Vec<Point>] {
        &self.holes
    }

    /// Exterior and holes, in that order.
    pub fn rings(&self) -> impl Iterator<Item = &[Point]> {
        std::iter::once(self.exterior.as_slice()).chain(self.holes.iter().map(|h| h.as_slice()))
    }

    /// Boundary-inclusive containment: points on the exterior or on any hole
    /// ring are inside; points strictly within a hole are outside.
    pub fn contains(&self, p: Point) -> bool {
        let ext = ring_scan(p, &self.exterior);
        if ext.on_boundary {
            return true;
        }
        if !ext.inside {
            return false;
        }
        for hole in &self.holes {
            let h = ring_scan(p, hole);
            if h.on_boundary {
                return true;
            }
            if h.inside {
                return false;
            }
        }
        true
    }

    /// Shoelace area of the exterior minus the holes.
    pub fn area(&self) -> f64 {
        // Orientation is normalized, so hole areas come out negative.
        self.holes
            .iter()
            .fold(signed_ring_area(&self.exterior), |acc, h| {
                acc + signed_ring_area(h)
            })
    }

    /// Exact area of the intersection between this polygon and `rect`,
    /// via half-plane clipping of the exterior and each hole against the
    /// four rectangle edges. Zero when disjoint.
    pub fn clip_area(&self, rect: &BoundingBox) -> f64 {
        let ext = clipped_ring_area(&self.exterior, rect);
        if ext == 0.0 {
            return 0.0;
        }
        let holes: f64 = self.holes.iter().map(|h| clipped_ring_area(h, rect)).sum();
        (ext - holes).max(0.0)
    }
}

/// One or more polygons treated as a single region.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiPolygon {
    polygons: Vec<Polygon>,
}

impl MultiPolygon {
    pub fn new(polygons: Vec<Polygon>) -> Result<Self> {
        if polygons.is_empty() {
            return Err(Error::Geometry(
                "multipolygon needs at least one member".into(),
            ));
        }
        Ok(MultiPolygon { polygons })
    }

    pub fn polygons(&self) -> &[Polygon] {
        &self.polygons
    }

    /// True when any member contains `p` (boundary-inclusive).
    pub fn contains(&self, p: Point) -> bool {
        self.polygons.iter().any(|poly| poly.contains(p))
    }
}

/// Any geometry a dataset can carry.
#[derive(Debug, Clone, PartialEq)]
pub enum Geometry {
    Point(Point),
    Polyline(Polyline),
    MultiPolygon(MultiPolygon),
}

/// Arc-length parameterization of every ring (exteriors and holes) of a
/// multipolygon, for drawing points that lie exactly on the boundary.
#[derive(Debug, Clone)]
pub struct Boundary {
    segments: Vec<(Point, Point)>,
    // cumulative[i] is the arc length before segments[i]
    cumulative: Vec<f64>,
    total: f64,
}

impl Boundary {
    pub fn of(mp: &MultiPolygon) -> Self {
        let mut segments = Vec::new();
        for poly in mp.polygons() {
            for ring in poly.rings() {
                for w in ring.windows(2) {
                    segments.push((w[0], w[1]));
                }
            }
        }
        let mut cumulative = Vec::with_capacity(segments.len());
        let mut total = 0.0;
        for (a, b) in &segments {
            cumulative.push(total);
            total += a.distance(*b);
        }
        Boundary {
            segments,
            cumulative,
            total,
        }
    }

    pub fn total_length(&self) -> f64 {
        self.total
    }

    /// Point at arc length `s` from the start of the first ring,
    /// for `0 <= s < total_length()`.
    pub fn point_at(&self, s: f64) -> Point {
        assert!(
            (0.0..self.total).contains(&s),
            "arc length {s} outside [0, {})",
            self.total
        );
        // Last segment whose start offset is <= s.
        let i = self.cumulative.partition_point(|&c| c <= s) - 1;
        let (a, b) = self.segments[i];
        let len = a.distance(b);
        let t = if len > 0.0 {
            ((s - self.cumulative[i]) / len).min(1.0)
        } else {
            0.0
        };
        Point::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))
    }

    /// `n` points drawn uniformly by arc length; bit-reproducible per seed.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<Point> {
        assert!(self.total > 0.0, "cannot sample an empty boundary");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| self.point_at(rng.gen_range(0.0..self.total)))
            .collect()
    }
}

/// `n` points uniform by arc length along all rings of `mp`.
pub fn sample_boundary_points(mp: &MultiPolygon, n: usize, seed: u64) -> Vec<Point> {
    Boundary::of(mp).sample(n, seed)
}

struct RingScan {
    on_boundary: bool,
    // Meaningless when on_boundary is set; callers must check that first.
    inside: bool,
}

/// Single pass over a closed ring: boundary proximity plus even-odd
/// crossing parity of a horizontal ray to the right of `p`. An edge counts
/// as crossed only when exactly one endpoint is strictly above the ray,
/// which is what keeps shared vertices from double-counting.
fn ring_scan(p: Point, ring: &[Point]) -> RingScan {
    let eps2 = BOUNDARY_EPS * BOUNDARY_EPS;
    let mut inside = false;
    for w in ring.windows(2) {
        let (a, b) = (w[0], w[1]);
        if dist2_point_segment(p, a, b) <= eps2 {
            return RingScan {
                on_boundary: true,
                inside: false,
            };
        }
        if (a.y > p.y) != (b.y > p.y) {
            let x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x_cross {
                inside = !inside;
            }
        }
    }
    RingScan {
        on_boundary: false,
        inside,
    }
}

fn dist2_point_segment(p: Point, a: Point, b: Point) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 {
        (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let (ex, ey) = (a.x + t * dx - p.x, a.y + t * dy - p.y);
    ex * ex + ey * ey
}

/// Twice-signed shoelace sum, halved: positive for counter-clockwise rings.
pub(crate) fn signed_ring_area(ring: &[Point]) -> f64 {
    0.5 * ring
        .windows(2)
        .map(|w| w[0].x * w[1].y - w[1].x * w[0].y)
        .sum::<f64>()
}

fn validate_ring(ring: &[Point]) -> std::result::Result<(), String> {
    if ring.len() < 4 {
        return Err(format!(
            "ring needs at least 4 entries including the closing vertex, got {}",
            ring.len()
        ));
    }
    for (i, v) in ring.iter().enumerate() {
        if !v.x.is_finite() || !v.y.is_finite() {
            return Err(format!("ring vertex {i} is not finite: ({}, {})", v.x, v.y));
        }
    }
    if ring.first() != ring.last() {
        return Err("ring is not closed (first and last vertices differ)".into());
    }
    for (i, w) in ring.windows(2).enumerate() {
        if w[0] == w[1] {
            return Err(format!(
                "ring has consecutive duplicate vertices at index {i}"
            ));
        }
    }
    let m = ring.len() - 1; // segment count
    for i in 0..m {
        for j in (i + 1)..m {
            let adjacent = j == i + 1 || (i == 0 && j == m - 1);
            if adjacent {
                // Segments sharing a vertex may touch only at that vertex;
                // a zero interior angle folds them onto each other.
                let (shared, e1, e2) = if j == i + 1 {
                    (ring[j], ring[i], ring[j + 1])
                } else {
                    (ring[0], ring[1], ring[m - 1])
                };
                let ux = e1.x - shared.x;
                let uy = e1.y - shared.y;
                let vx = e2.x - shared.x;
                let vy = e2.y - shared.y;
                if ux * vy - uy * vx == 0.0 && ux * vx + uy * vy > 0.0 {
                    return Err(format!("adjacent ring segments {i} and {j} overlap"));
                }
            } else if segments_intersect(ring[i], ring[i + 1], ring[j], ring[j + 1]) {
                return Err(format!("ring segments {i} and {j} intersect"));
            }
        }
    }
    Ok(())
}

fn cross3(o: Point, a: Point, b: Point) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

fn collinear_point_on_segment(p: Point, a: Point, b: Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Closed segment intersection test, touching included.
pub(crate) fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let d1 = cross3(c, d, a);
    let d2 = cross3(c, d, b);
    let d3 = cross3(a, b, c);
    let d4 = cross3(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && collinear_point_on_segment(a, c, d))
        || (d2 == 0.0 && collinear_point_on_segment(b, c, d))
        || (d3 == 0.0 && collinear_point_on_segment(c, a, b))
        || (d4 == 0.0 && collinear_point_on_segment(d, a, b))
}

fn clipped_ring_area(ring: &[Point], rect: &BoundingBox) -> f64 {
    #[derive(Clone, Copy)]
    enum Edge {
        Left,
        Right,
        Bottom,
        Top,
    }
    use Edge::*;

    fn inside(p: Point, e: Edge, r: &BoundingBox) -> bool {
        match e {
            Left => p.x >= r.xmin,
            Right => p.x <= r.xmax,
            Bottom => p.y >= r.ymin,
            Top => p.y <= r.ymax,
        }
    }

    fn intersect(a: Point, b: Point, e: Edge, r: &BoundingBox) -> Point {
        match e {
            Left | Right => {
                let x = if matches!(e, Left) { r.xmin } else { r.xmax };
                let t = (x - a.x) / (b.x - a.x);
                Point::new(x, a.y + t * (b.y - a.y))
            }
            Bottom | Top => {
                let y = if matches!(e, Bottom) { r.ymin } else { r.ymax };
                let t = (y - a.y) / (b.y - a.y);
                Point::new(a.x + t * (b.x - a.x), y)
            }
        }
    }

    // Open vertex list; closure is implicit in the clip loop.
    let mut pts: Vec<Point> = ring[..ring.len() - 1].to_vec();
    for e in [Left, Right, Bottom, Top] {
        if pts.is_empty() {
            return 0.0;
        }
        let mut out = Vec::with_capacity(pts.len() + 4);
        let mut prev = *pts.last().unwrap();
        for &cur in &pts {
            let prev_in = inside(prev, e, rect);
            let cur_in = inside(cur, e, rect);
            if cur_in {
                if !prev_in {
                    out.push(intersect(prev, cur, e, rect));
                }
                out.push(cur);
            } else if prev_in {
                out.push(intersect(prev, cur, e, rect));
            }
            prev = cur;
        }
        pts = out;
    }
    if pts.len() < 3 {
        return 0.0;
    }
    let mut twice = 0.0;
    for i in 0..pts.len() {
        let a = pts[i];
        let b = pts[(i + 1) % pts.len()];
        twice += a.x * b.y - b.x * a.y;
    }
    (twice * 0.5).abs()
}
