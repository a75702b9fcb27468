//! Vector-to-raster conversion.
//!
//! Points claim the cell that contains them. Polylines claim every cell
//! whose closed rectangle the chain touches, so a segment running exactly
//! along a gridline claims the cells on both sides. Polygons claim cells by
//! a selectable rule: center membership, or area fraction strictly above a
//! threshold.
//!
//! Area fractions are computed exactly (up to rounding) by sweeping each
//! ring edge through the grid: an edge piece inside one cell contributes its
//! trapezoid against the cell's right boundary to that cell, and its full
//! vertical extent to every cell further right via a per-row prefix scan.
//! This keeps the work proportional to the cells the boundary touches, not
//! to polygon vertices times grid cells, and exterior and hole rings cancel
//! without special casing because their orientations are normalized.

use crate::geometry::{segments_intersect, BoundingBox, Geometry, MultiPolygon, Point, Polyline};
use crate::grid::{CellIndex, GridSpec, Raster};

/// Decides which cells a polygon region claims.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoverageRule {
    /// A cell is covered when its center lies in the region, boundary
    /// included.
    CenterInPolygon,
    /// A cell is covered when the region overlaps strictly more than
    /// `threshold` of its area, for `0 < threshold <= 1`. A cell at exactly
    /// the threshold is not covered.
    AreaFraction { threshold: f64 },
}

impl CoverageRule {
    /// Majority rule: covered when more than half of the cell is inside.
    pub fn area_majority() -> Self {
        CoverageRule::AreaFraction { threshold: 0.5 }
    }
}

impl Default for CoverageRule {
    fn default() -> Self {
        Self::area_majority()
    }
}

/// Marks the cell containing each point. Points outside the extent are
/// skipped and counted in a single warning.
pub fn rasterize_points(points: &[Point], value: i32, spec: &GridSpec) -> Raster {
    let mut raster = Raster::zeroed(spec.clone());
    points_into(&mut raster, points, value);
    raster
}

/// Marks every cell whose closed rectangle the chain touches.
pub fn rasterize_polyline(line: &Polyline, value: i32, spec: &GridSpec) -> Raster {
    let mut raster = Raster::zeroed(spec.clone());
    polyline_into(&mut raster, line, value);
    raster
}

/// Marks the cells claimed by a polygon region under `rule`.
pub fn rasterize_polygons(
    mp: &MultiPolygon,
    value: i32,
    spec: &GridSpec,
    rule: CoverageRule,
) -> Raster {
    let mut raster = Raster::zeroed(spec.clone());
    polygons_into(&mut raster, mp, value, rule);
    raster
}

/// Rasterizes a whole dataset onto one grid: a cell is marked when any
/// geometry claims it. The area-fraction rule applies per multipolygon;
/// coverage never sums across separate geometries.
pub fn rasterize_dataset(
    geoms: &[Geometry],
    value: i32,
    spec: &GridSpec,
    rule: CoverageRule,
) -> Raster {
    let mut raster = Raster::zeroed(spec.clone());
    for geom in geoms {
        match geom {
            Geometry::Point(p) => points_into(&mut raster, std::slice::from_ref(p), value),
            Geometry::Polyline(line) => polyline_into(&mut raster, line, value),
            Geometry::MultiPolygon(mp) => polygons_into(&mut raster, mp, value, rule),
        }
    }
    raster
}

fn points_into(raster: &mut Raster, points: &[Point], value: i32) {
    let spec = raster.spec().clone();
    let mut skipped = 0usize;
    for &p in points {
        match spec.cell_of(p) {
            Some(c) => raster.set(c, value),
            None => skipped += 1,
        }
    }
    if skipped > 0 {
        log::warn!(
            "{skipped} of {} points fall outside the grid extent",
            points.len()
        );
    }
}

fn polyline_into(raster: &mut Raster, line: &Polyline, value: i32) {
    let spec = raster.spec().clone();
    for seg in line.vertices().windows(2) {
        mark_segment(raster, &spec, seg[0], seg[1], value);
    }
}

fn polygons_into(raster: &mut Raster, mp: &MultiPolygon, value: i32, rule: CoverageRule) {
    match rule {
        CoverageRule::CenterInPolygon => polygons_center_into(raster, mp, value),
        CoverageRule::AreaFraction { threshold } => {
            assert!(
                threshold > 0.0 && threshold <= 1.0,
                "area fraction threshold must be in (0, 1], got {threshold}"
            );
            polygons_area_into(raster, mp, value, threshold);
        }
    }
}

/// Cell window (inclusive row/col ranges) overlapping a world rectangle,
/// padded by one cell so boundary contact cases stay inside the window.
fn window(
    spec: &GridSpec,
    xmin: f64,
    ymin: f64,
    xmax: f64,
    ymax: f64,
) -> Option<(usize, usize, usize, usize)> {
    let res = spec.resolution;
    let c0 = (((xmin - spec.xmin) / res).floor() - 1.0).max(0.0);
    let c1 = (((xmax - spec.xmin) / res).floor() + 1.0).min(spec.ncols as f64 - 1.0);
    let r0 = (((spec.ymax - ymax) / res).floor() - 1.0).max(0.0);
    let r1 = (((spec.ymax - ymin) / res).floor() + 1.0).min(spec.nrows as f64 - 1.0);
    if c0 > c1 || r0 > r1 {
        return None;
    }
    Some((r0 as usize, r1 as usize, c0 as usize, c1 as usize))
}

fn ring_bbox(ring: &[Point]) -> (f64, f64, f64, f64) {
    let mut xmin = f64::INFINITY;
    let mut ymin = f64::INFINITY;
    let mut xmax = f64::NEG_INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    for p in ring {
        xmin = xmin.min(p.x);
        ymin = ymin.min(p.y);
        xmax = xmax.max(p.x);
        ymax = ymax.max(p.y);
    }
    (xmin, ymin, xmax, ymax)
}

fn polygons_center_into(raster: &mut Raster, mp: &MultiPolygon, value: i32) {
    let spec = raster.spec().clone();
    for poly in mp.polygons() {
        // Holes lie inside the exterior, so its bounding box bounds the
        // whole polygon.
        let (xmin, ymin, xmax, ymax) = ring_bbox(poly.exterior());
        let Some((r0, r1, c0, c1)) = window(&spec, xmin, ymin, xmax, ymax) else {
            continue;
        };
        for row in r0..=r1 {
            for col in c0..=c1 {
                let c = CellIndex { row, col };
                if poly.contains(spec.cell_center(c)) {
                    raster.set(c, value);
                }
            }
        }
    }
}

fn polygons_area_into(raster: &mut Raster, mp: &MultiPolygon, value: i32, threshold: f64) {
    let spec = raster.spec().clone();
    let mut xmin = f64::INFINITY;
    let mut ymin = f64::INFINITY;
    let mut xmax = f64::NEG_INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    for poly in mp.polygons() {
        let bb = ring_bbox(poly.exterior());
        xmin = xmin.min(bb.0);
        ymin = ymin.min(bb.1);
        xmax = xmax.max(bb.2);
        ymax = ymax.max(bb.3);
    }
    let Some((r0, r1, c0, c1)) = window(&spec, xmin, ymin, xmax, ymax) else {
        return;
    };
    let h = r1 - r0 + 1;
    let w = c1 - c0 + 1;
    let mut area = vec![0.0f64; h * w];
    let mut cover = vec![0.0f64; h * w];
    for poly in mp.polygons() {
        for ring in poly.rings() {
            accumulate_ring(ring, &spec, r0, c0, w, h, &mut area, &mut cover);
        }
    }
    for lr in 0..h {
        let mut running = 0.0f64;
        for lc in 0..w {
            let idx = lr * w + lc;
            let cov = area[idx] + running;
            running += cover[idx];
            if cov > threshold {
                raster.set(
                    CellIndex {
                        row: r0 + lr,
                        col: c0 + lc,
                    },
                    value,
                );
            }
        }
    }
}

/// Per-cell coverage fractions of a region, row major over the whole grid.
///
/// Each entry is the fraction of that cell's area inside `mp`, in `[0, 1]`
/// for non-self-overlapping regions. The area threshold of [`CoverageRule`]
/// is compared against these values; they are exposed for callers that want
/// the fractions themselves, for weighting or for choosing a threshold.
pub fn polygon_coverage(mp: &MultiPolygon, spec: &GridSpec) -> Vec<f64> {
    let w = spec.ncols;
    let h = spec.nrows;
    let mut area = vec![0.0f64; w * h];
    let mut cover = vec![0.0f64; w * h];
    for poly in mp.polygons() {
        for ring in poly.rings() {
            accumulate_ring(ring, spec, 0, 0, w, h, &mut area, &mut cover);
        }
    }
    let mut cov = vec![0.0f64; w * h];
    for r in 0..h {
        let mut running = 0.0f64;
        for c in 0..w {
            let idx = r * w + c;
            cov[idx] = area[idx] + running;
            running += cover[idx];
        }
    }
    cov
}

/// Sweeps one closed ring through a cell window, accumulating the signed
/// area each edge contributes.
///
/// Coordinates are converted to cell units relative to the window's top-left
/// corner: `u` grows rightward, `v` grows downward, so a ring that is
/// counter-clockwise in world coordinates sweeps positive coverage. Each
/// edge is cut at every gridline it crosses; a piece then lies inside a
/// single cell and adds `dv * (right boundary - mean u)` to that cell's
/// `area` and `dv` to its `cover`, which a later prefix scan spreads to all
/// cells further right. Pieces left of the window clamp onto its left edge
/// (everything in the window is to their right); pieces right of it land on
/// the last column where their `cover` reaches nothing.
fn accumulate_ring(
    ring: &[Point],
    spec: &GridSpec,
    r0: usize,
    c0: usize,
    w: usize,
    h: usize,
    area: &mut [f64],
    cover: &mut [f64],
) {
    let wf = w as f64;
    let hf = h as f64;
    let res = spec.resolution;
    let mut cuts: Vec<f64> = Vec::new();
    for seg in ring.windows(2) {
        let u0 = (seg[0].x - spec.xmin) / res - c0 as f64;
        let v0 = (spec.ymax - seg[0].y) / res - r0 as f64;
        let u1 = (seg[1].x - spec.xmin) / res - c0 as f64;
        let v1 = (spec.ymax - seg[1].y) / res - r0 as f64;
        if v0 == v1 {
            // Horizontal edges sweep no vertical extent.
            continue;
        }
        // Parameter interval of the edge inside the window's vertical span.
        let t_top = (0.0 - v0) / (v1 - v0);
        let t_bot = (hf - v0) / (v1 - v0);
        let tlo = t_top.min(t_bot).max(0.0);
        let thi = t_top.max(t_bot).min(1.0);
        if tlo >= thi {
            continue;
        }
        cuts.clear();
        cuts.push(tlo);
        cuts.push(thi);
        let va = v0 + tlo * (v1 - v0);
        let vb = v0 + thi * (v1 - v0);
        let (vmin, vmax) = if va <= vb { (va, vb) } else { (vb, va) };
        let mut k = vmin.floor() + 1.0;
        while k < vmax {
            cuts.push((k - v0) / (v1 - v0));
            k += 1.0;
        }
        if u0 != u1 {
            let ua = u0 + tlo * (u1 - u0);
            let ub = u0 + thi * (u1 - u0);
            let (umin, umax) = if ua <= ub { (ua, ub) } else { (ub, ua) };
            // Gridlines outside [0, w] are irrelevant: those parts clamp
            // onto the window boundary anyway.
            let mut k = (umin.floor() + 1.0).max(0.0);
            while k < umax && k <= wf {
                cuts.push((k - u0) / (u1 - u0));
                k += 1.0;
            }
        }
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        // Evaluate u and v once per cut and reuse across adjacent pieces so
        // per-row sums telescope exactly.
        let mut t_prev = cuts[0];
        let mut u_prev = (u0 + t_prev * (u1 - u0)).clamp(0.0, wf);
        let mut v_prev = v0 + t_prev * (v1 - v0);
        for &t in &cuts[1..] {
            if t <= t_prev {
                continue;
            }
            let u_cur = (u0 + t * (u1 - u0)).clamp(0.0, wf);
            let v_cur = v0 + t * (v1 - v0);
            let vm = 0.5 * (v_prev + v_cur);
            let row = vm.floor();
            if row >= 0.0 && row < hf {
                let um = 0.5 * (u_prev + u_cur);
                let col = um.floor().clamp(0.0, wf - 1.0);
                let dv = v_cur - v_prev;
                let idx = row as usize * w + col as usize;
                area[idx] += dv * ((col + 1.0) - um);
                cover[idx] += dv;
            }
            t_prev = t;
            u_prev = u_cur;
            v_prev = v_cur;
        }
    }
}

fn mark_segment(raster: &mut Raster, spec: &GridSpec, a: Point, b: Point, value: i32) {
    let res = spec.resolution;
    let u0 = (a.x - spec.xmin) / res;
    let v0 = (spec.ymax - a.y) / res;
    let u1 = (b.x - spec.xmin) / res;
    let v1 = (spec.ymax - b.y) / res;
    let r0 = (v0.min(v1).floor() - 1.0).max(0.0);
    let r1 = (v0.max(v1).floor() + 1.0).min(spec.nrows as f64 - 1.0);
    if r0 > r1 {
        return;
    }
    for row in (r0 as usize)..=(r1 as usize) {
        // Parameter interval where the segment's v lies in this row's slab.
        let (tlo, thi) = if v0 == v1 {
            if v0 >= row as f64 && v0 <= row as f64 + 1.0 {
                (0.0, 1.0)
            } else {
                continue;
            }
        } else {
            let ta = (row as f64 - v0) / (v1 - v0);
            let tb = (row as f64 + 1.0 - v0) / (v1 - v0);
            let lo = ta.min(tb).max(0.0);
            let hi = ta.max(tb).min(1.0);
            if lo > hi {
                continue;
            }
            (lo, hi)
        };
        let ua = u0 + tlo * (u1 - u0);
        let ub = u0 + thi * (u1 - u0);
        let c0 = (ua.min(ub).floor() - 1.0).max(0.0);
        let c1 = (ua.max(ub).floor() + 1.0).min(spec.ncols as f64 - 1.0);
        if c0 > c1 {
            continue;
        }
        for col in (c0 as usize)..=(c1 as usize) {
            let c = CellIndex { row, col };
            if segment_touches_cell(a, b, &spec.cell_bounds(c)) {
                raster.set(c, value);
            }
        }
    }
}

/// Closed contact test between a segment and a cell rectangle: an endpoint
/// inside the rectangle, or any crossing or touch of its four edges.
pub(crate) fn segment_touches_cell(a: Point, b: Point, r: &BoundingBox) -> bool {
    if r.contains(a) || r.contains(b) {
        return true;
    }
    let bl = Point::new(r.xmin, r.ymin);
    let br = Point::new(r.xmax, r.ymin);
    let tr = Point::new(r.xmax, r.ymax);
    let tl = Point::new(r.xmin, r.ymax);
    segments_intersect(a, b, bl, br)
        || segments_intersect(a, b, br, tr)
        || segments_intersect(a, b, tr, tl)
        || segments_intersect(a, b, tl, bl)
}
