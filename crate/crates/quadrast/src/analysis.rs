//! Point-membership evaluation across representations, plus the sampling,
//! timing, and reporting used to compare them.
//!
//! The vector representation answers queries from the geometry itself and
//! serves as the accuracy baseline; raster and quadtree answer from grid
//! cells and are scored against it. Timing covers whole batches, with a
//! per-query figure taken as the median over fixed-size chunks so stray
//! scheduler noise does not skew it.

use std::io::Write;
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{Boundary, BoundingBox, Geometry, MultiPolygon, Point};
use crate::grid::{GridSpec, Raster};
use crate::io::Dataset;
use crate::quadtree::{intersect_and, Quadtree};
use crate::rasterize::{rasterize_dataset, CoverageRule};

/// Points per timing chunk; the per-query figure is the median over chunks.
pub const TIMING_CHUNK: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Representation {
    Vector,
    Raster,
    Quadtree,
}

impl Representation {
    pub const ALL: [Representation; 3] = [
        Representation::Vector,
        Representation::Raster,
        Representation::Quadtree,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Representation::Vector => "vector",
            Representation::Raster => "raster",
            Representation::Quadtree => "quadtree",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampler {
    /// Points uniform over the extent.
    Uniform,
    /// Points uniform by arc length along polygon boundaries: every query
    /// lands on a region edge, the hardest case for gridded answers.
    Border,
}

struct Member<'a> {
    // Bounding box expanded by the match tolerance, for cheap rejection.
    xmin: f64,
    ymin: f64,
    xmax: f64,
    ymax: f64,
    geom: &'a Geometry,
}

impl Member<'_> {
    fn hit(&self, p: Point, tol: f64) -> bool {
        if p.x < self.xmin || p.x > self.xmax || p.y < self.ymin || p.y > self.ymax {
            return false;
        }
        match self.geom {
            Geometry::Point(q) => q.distance(p) <= tol,
            Geometry::Polyline(line) => line.within_distance(p, tol),
            Geometry::MultiPolygon(mp) => mp.contains(p),
        }
    }
}

/// Query-ready view of one or two geometry collections.
///
/// A point matches a collection when any member claims it: polygons by
/// boundary-inclusive containment, polylines and points by distance at most
/// `tol`. With two collections the point must match both, mirroring the
/// gridded intersection of the two datasets.
pub struct VectorDataset<'a> {
    clauses: Vec<Vec<Member<'a>>>,
    tol: f64,
}

fn members(geoms: &[Geometry], pad: f64) -> Vec<Member<'_>> {
    geoms
        .iter()
        .map(|geom| {
            let mut xmin = f64::INFINITY;
            let mut ymin = f64::INFINITY;
            let mut xmax = f64::NEG_INFINITY;
            let mut ymax = f64::NEG_INFINITY;
            let mut take = |p: &Point| {
                xmin = xmin.min(p.x);
                ymin = ymin.min(p.y);
                xmax = xmax.max(p.x);
                ymax = ymax.max(p.y);
            };
            match geom {
                Geometry::Point(p) => take(p),
                Geometry::Polyline(line) => line.vertices().iter().for_each(&mut take),
                Geometry::MultiPolygon(mp) => {
                    for poly in mp.polygons() {
                        poly.exterior().iter().for_each(&mut take);
                    }
                }
            }
            Member {
                xmin: xmin - pad,
                ymin: ymin - pad,
                xmax: xmax + pad,
                ymax: ymax + pad,
                geom,
            }
        })
        .collect()
}

impl<'a> VectorDataset<'a> {
    pub fn new(geoms: &'a [Geometry], tol: f64) -> Self {
        assert!(tol.is_finite() && tol >= 0.0, "bad tolerance {tol}");
        let pad = tol + crate::geometry::BOUNDARY_EPS;
        VectorDataset {
            clauses: vec![members(geoms, pad)],
            tol,
        }
    }

    /// A point must match both collections.
    pub fn conjunction(a: &'a [Geometry], b: &'a [Geometry], tol: f64) -> Self {
        assert!(tol.is_finite() && tol >= 0.0, "bad tolerance {tol}");
        let pad = tol + crate::geometry::BOUNDARY_EPS;
        VectorDataset {
            clauses: vec![members(a, pad), members(b, pad)],
            tol,
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        self.clauses
            .iter()
            .all(|clause| clause.iter().any(|m| m.hit(p, self.tol)))
    }
}

/// One queryable representation.
pub enum RepHandle<'a> {
    Vector(&'a VectorDataset<'a>),
    Raster(&'a Raster),
    Quadtree(&'a Quadtree),
}

impl RepHandle<'_> {
    pub fn kind(&self) -> Representation {
        match self {
            RepHandle::Vector(_) => Representation::Vector,
            RepHandle::Raster(_) => Representation::Raster,
            RepHandle::Quadtree(_) => Representation::Quadtree,
        }
    }

    /// Is `p` covered? Gridded representations count any nonzero,
    /// non-nodata cell value as covered.
    pub fn eval(&self, p: Point) -> bool {
        match self {
            RepHandle::Vector(d) => d.contains(p),
            RepHandle::Raster(r) => matches!(r.value_at(p), Some(v) if v != 0),
            RepHandle::Quadtree(t) => matches!(t.value_at(p), Some(v) if v != 0),
        }
    }
}

/// `n` points uniform over the box; bit-reproducible per seed. Draws are
/// half-open, so points never sit on the right or top edge.
pub fn sample_uniform_points(extent: &BoundingBox, n: usize, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            Point::new(
                rng.gen_range(extent.xmin..extent.xmax),
                rng.gen_range(extent.ymin..extent.ymax),
            )
        })
        .collect()
}

#[derive(Debug, Clone, Copy)]
pub struct BatchTiming {
    pub batch_ns: u64,
    pub per_query_median_ns: f64,
}

/// Evaluates every point, preserving order.
pub fn pip_batch(rep: &RepHandle<'_>, points: &[Point], exec: Execution) -> Vec<bool> {
    match exec {
        Execution::Sequential => points.iter().map(|p| rep.eval(*p)).collect(),
        Execution::Parallel => match rep {
            // Share nothing mutable; rayon preserves chunk order on collect.
            RepHandle::Vector(d) => points.par_iter().map(|p| d.contains(*p)).collect(),
            RepHandle::Raster(r) => points
                .par_iter()
                .map(|p| matches!(r.value_at(*p), Some(v) if v != 0))
                .collect(),
            RepHandle::Quadtree(t) => points
                .par_iter()
                .map(|p| matches!(t.value_at(*p), Some(v) if v != 0))
                .collect(),
        },
    }
}

/// Evaluates every point and reports whole-batch and per-query timings.
pub fn pip_batch_timed(
    rep: &RepHandle<'_>,
    points: &[Point],
    exec: Execution,
) -> (Vec<bool>, BatchTiming) {
    assert!(!points.is_empty(), "cannot time an empty batch");
    let start = Instant::now();
    let (results, mut chunk_ns): (Vec<bool>, Vec<f64>) = match exec {
        Execution::Sequential => {
            let mut results = Vec::with_capacity(points.len());
            let mut chunk_ns = Vec::with_capacity(points.len() / TIMING_CHUNK + 1);
            for chunk in points.chunks(TIMING_CHUNK) {
                let t0 = Instant::now();
                results.extend(chunk.iter().map(|p| rep.eval(*p)));
                chunk_ns.push(t0.elapsed().as_nanos() as f64 / chunk.len() as f64);
            }
            (results, chunk_ns)
        }
        Execution::Parallel => {
            let timed: Vec<(Vec<bool>, f64)> = points
                .par_chunks(TIMING_CHUNK)
                .map(|chunk| {
                    let t0 = Instant::now();
                    let out: Vec<bool> = chunk.iter().map(|p| rep.eval(*p)).collect();
                    (out, t0.elapsed().as_nanos() as f64 / chunk.len() as f64)
                })
                .collect();
            let mut results = Vec::with_capacity(points.len());
            let mut chunk_ns = Vec::with_capacity(timed.len());
            for (out, ns) in timed {
                results.extend(out);
                chunk_ns.push(ns);
            }
            (results, chunk_ns)
        }
    };
    let batch_ns = start.elapsed().as_nanos() as u64;
    let per_query_median_ns = median(&mut chunk_ns);
    (
        results,
        BatchTiming {
            batch_ns,
            per_query_median_ns,
        },
    )
}

pub(crate) fn median(xs: &mut [f64]) -> f64 {
    assert!(!xs.is_empty(), "median of nothing");
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mid = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[mid]
    } else {
        0.5 * (xs[mid - 1] + xs[mid])
    }
}

/// Confusion counts of a candidate against the baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AccuracyReport {
    pub true_pos: usize,
    pub true_neg: usize,
    pub false_pos: usize,
    pub false_neg: usize,
}

impl AccuracyReport {
    pub fn total(&self) -> usize {
        self.true_pos + self.true_neg + self.false_pos + self.false_neg
    }

    /// Fraction of answers agreeing with the baseline.
    pub fn accuracy(&self) -> f64 {
        (self.true_pos + self.true_neg) as f64 / self.total() as f64
    }
}

/// Compares answer vectors elementwise. Panics on length mismatch; the
/// vectors must come from the same point batch.
pub fn accuracy(baseline: &[bool], candidate: &[bool]) -> AccuracyReport {
    assert_eq!(
        baseline.len(),
        candidate.len(),
        "answer vectors come from different batches"
    );
    assert!(!baseline.is_empty(), "empty comparison");
    let mut report = AccuracyReport {
        true_pos: 0,
        true_neg: 0,
        false_pos: 0,
        false_neg: 0,
    };
    for (&b, &c) in baseline.iter().zip(candidate) {
        match (b, c) {
            (true, true) => report.true_pos += 1,
            (false, false) => report.true_neg += 1,
            (false, true) => report.false_pos += 1,
            (true, false) => report.false_neg += 1,
        }
    }
    report
}

/// One measured run of one representation.
#[derive(Debug, Clone)]
pub struct BenchRow {
    pub representation: Representation,
    /// `None` for the vector baseline, which has no grid.
    pub resolution_m: Option<f64>,
    pub run: u32,
    pub batch_ns: u64,
    pub per_query_median_ns: f64,
    pub accuracy: f64,
    pub n: usize,
    /// The derived seed this run's points were drawn with.
    pub seed: u64,
}

#[derive(Debug, Clone, Default)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    /// CSV with a fixed header; vector rows leave the resolution field
    /// empty. Lines end with LF.
    pub fn write_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(
            out,
            "representation,resolution_m,run,batch_ns,per_query_median_ns,accuracy,n,seed"
        )?;
        for r in &self.rows {
            let res = r.resolution_m.map(|v| v.to_string()).unwrap_or_default();
            writeln!(
                out,
                "{},{},{},{},{:.1},{:.6},{},{}",
                r.representation.as_str(),
                res,
                r.run,
                r.batch_ns,
                r.per_query_median_ns,
                r.accuracy,
                r.n,
                r.seed
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub resolutions: Vec<f64>,
    pub n: usize,
    pub runs: u32,
    pub sampler: Sampler,
    pub seed: u64,
    pub execution: Execution,
    pub rule: CoverageRule,
}

/// Benchmarks vector, raster, and quadtree representations of `primary`
/// (intersected with `secondary` when given) over each resolution.
///
/// Each run draws a fresh point sample with seed `seed + run` (run numbers
/// start at 1; an untimed warmup uses `seed` itself). The vector answers are
/// the accuracy baseline, so vector rows always score 1.
pub fn run_benchmark(
    primary: &Dataset,
    secondary: Option<&Dataset>,
    extent: &BoundingBox,
    cfg: &BenchConfig,
) -> Result<BenchReport> {
    assert!(!cfg.resolutions.is_empty(), "no resolutions to benchmark");
    assert!(cfg.runs >= 1 && cfg.n >= 1, "empty benchmark");
    for &res in &cfg.resolutions {
        assert!(res.is_finite() && res > 0.0, "bad resolution {res}");
    }

    let boundary = match cfg.sampler {
        Sampler::Uniform => None,
        Sampler::Border => {
            let mut polys = Vec::new();
            for ds in std::iter::once(primary).chain(secondary) {
                for geom in &ds.geoms {
                    if let Geometry::MultiPolygon(mp) = geom {
                        polys.extend(mp.polygons().iter().cloned());
                    }
                }
            }
            if polys.is_empty() {
                return Err(Error::InvalidInput(
                    "border sampling requires polygon geometries".to_string(),
                ));
            }
            Some(Boundary::of(&MultiPolygon::new(polys).expect("nonempty")))
        }
    };
    let sample = |run_seed: u64| -> Vec<Point> {
        match &boundary {
            None => sample_uniform_points(extent, cfg.n, run_seed),
            Some(b) => b.sample(cfg.n, run_seed),
        }
    };

    let mut report = BenchReport::default();
    for &res in &cfg.resolutions {
        let spec = GridSpec::from_extent(extent, res, "");
        let tol = res / 2.0;
        let vector = match secondary {
            None => VectorDataset::new(&primary.geoms, tol),
            Some(b) => VectorDataset::conjunction(&primary.geoms, &b.geoms, tol),
        };
        let raster = {
            let a = rasterize_dataset(&primary.geoms, primary.value, &spec, cfg.rule);
            match secondary {
                None => a,
                Some(bds) => {
                    let b = rasterize_dataset(&bds.geoms, bds.value, &spec, cfg.rule);
                    a.combine(&b, |x, y| i32::from(x != 0 && y != 0))?
                }
            }
        };
        let tree = match secondary {
            None => Quadtree::from_raster(&raster),
            Some(bds) => {
                let a = Quadtree::from_raster(&rasterize_dataset(
                    &primary.geoms,
                    primary.value,
                    &spec,
                    cfg.rule,
                ));
                let b = Quadtree::from_raster(&rasterize_dataset(
                    &bds.geoms, bds.value, &spec, cfg.rule,
                ));
                intersect_and(&a, &b)?
            }
        };
        let handles = [
            RepHandle::Vector(&vector),
            RepHandle::Raster(&raster),
            RepHandle::Quadtree(&tree),
        ];

        // Warmup: touch every representation once with this resolution's
        // structures so first-run rows are not paying cold-cache costs.
        let warm = sample(cfg.seed);
        for h in &handles {
            let _ = pip_batch(h, &warm, cfg.execution);
        }

        for run in 1..=cfg.runs {
            let run_seed = cfg.seed + run as u64;
            let points = sample(run_seed);
            let (baseline, vt) = pip_batch_timed(&handles[0], &points, cfg.execution);
            report.rows.push(BenchRow {
                representation: Representation::Vector,
                resolution_m: None,
                run,
                batch_ns: vt.batch_ns,
                per_query_median_ns: vt.per_query_median_ns,
                accuracy: 1.0,
                n: cfg.n,
                seed: run_seed,
            });
            for h in &handles[1..] {
                let (answers, t) = pip_batch_timed(h, &points, cfg.execution);
                report.rows.push(BenchRow {
                    representation: h.kind(),
                    resolution_m: Some(res),
                    run,
                    batch_ns: t.batch_ns,
                    per_query_median_ns: t.per_query_median_ns,
                    accuracy: accuracy(&baseline, &answers).accuracy(),
                    n: cfg.n,
                    seed: run_seed,
                });
            }
        }
    }
    Ok(report)
}

/// Aggregate view of one (representation, resolution) group.
#[derive(Debug, Clone)]
pub struct Summary {
    pub representation: Representation,
    pub resolution_m: Option<f64>,
    pub median_batch_ns: f64,
    pub median_per_query_ns: f64,
    pub mean_accuracy: f64,
    /// Vector median batch time over this group's; `None` for the baseline.
    pub speedup_vs_vector: Option<f64>,
}

/// Groups rows by representation and resolution (first-seen order) and
/// reduces them to medians, with batch speedups against the vector
/// baseline.
pub fn summarize(report: &BenchReport) -> Vec<Summary> {
    assert!(!report.rows.is_empty(), "nothing to summarize");
    let mut order: Vec<(Representation, Option<u64>)> = Vec::new();
    for r in &report.rows {
        let key = (r.representation, r.resolution_m.map(f64::to_bits));
        if !order.contains(&key) {
            order.push(key);
        }
    }
    let group = |key: &(Representation, Option<u64>)| -> Vec<&BenchRow> {
        report
            .rows
            .iter()
            .filter(|r| r.representation == key.0 && r.resolution_m.map(f64::to_bits) == key.1)
            .collect()
    };
    let vector_median = {
        let rows = group(&(Representation::Vector, None));
        assert!(!rows.is_empty(), "report has no vector baseline rows");
        let mut xs: Vec<f64> = rows.iter().map(|r| r.batch_ns as f64).collect();
        median(&mut xs)
    };
    order
        .iter()
        .map(|key| {
            let rows = group(key);
            let mut batch: Vec<f64> = rows.iter().map(|r| r.batch_ns as f64).collect();
            let mut perq: Vec<f64> = rows.iter().map(|r| r.per_query_median_ns).collect();
            let mean_accuracy = rows.iter().map(|r| r.accuracy).sum::<f64>() / rows.len() as f64;
            let median_batch_ns = median(&mut batch);
            Summary {
                representation: key.0,
                resolution_m: key.1.map(f64::from_bits),
                median_batch_ns,
                median_per_query_ns: median(&mut perq),
                mean_accuracy,
                speedup_vs_vector: match key.0 {
                    Representation::Vector => None,
                    _ => Some(vector_median / median_batch_ns),
                },
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Polygon, Polyline};

    fn pt(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn square(x0: f64, y0: f64, side: f64) -> Geometry {
        Geometry::MultiPolygon(
            MultiPolygon::new(vec![Polygon::new(
                vec![
                    pt(x0, y0),
                    pt(x0 + side, y0),
                    pt(x0 + side, y0 + side),
                    pt(x0, y0 + side),
                    pt(x0, y0),
                ],
                vec![],
            )
            .unwrap()])
            .unwrap(),
        )
    }

    fn square_dataset() -> Dataset {
        Dataset {
            name: "squares".into(),
            geoms: vec![square(2.0, 2.0, 8.0)],
            value: 1,
        }
    }

    #[test]
    fn accuracy_counts_exactly() {
        let baseline = vec![true; 100_000];
        let mut candidate = baseline.clone();
        for slot in candidate.iter_mut().take(2300) {
            *slot = false;
        }
        let report = accuracy(&baseline, &candidate);
        assert_eq!(report.false_neg, 2300);
        assert_eq!(report.true_pos, 97_700);
        assert_eq!(report.accuracy(), 0.977);

        let flipped: Vec<bool> = baseline.iter().map(|b| !b).collect();
        assert_eq!(accuracy(&baseline, &flipped).accuracy(), 0.0);
        assert_eq!(accuracy(&baseline, &baseline).accuracy(), 1.0);
    }

    #[test]
    #[should_panic]
    fn accuracy_rejects_mismatched_batches() {
        accuracy(&[true, false], &[true]);
    }

    #[test]
    fn uniform_sampler_is_deterministic_and_contained() {
        let e = BoundingBox::new(-4.0, 10.0, 12.0, 30.0);
        let a = sample_uniform_points(&e, 20_000, 9);
        assert_eq!(a, sample_uniform_points(&e, 20_000, 9));
        assert_ne!(a, sample_uniform_points(&e, 20_000, 10));
        let mut mean = (0.0, 0.0);
        for p in &a {
            assert!(e.contains(*p));
            assert!(p.x < e.xmax && p.y < e.ymax, "draws are half-open");
            mean.0 += p.x;
            mean.1 += p.y;
        }
        mean.0 /= a.len() as f64;
        mean.1 /= a.len() as f64;
        // Mean of n uniforms has sd width/sqrt(12 n); allow five sigma.
        let sd_x = e.width() / (12.0f64 * a.len() as f64).sqrt();
        let sd_y = e.height() / (12.0f64 * a.len() as f64).sqrt();
        assert!((mean.0 - 4.0).abs() < 5.0 * sd_x, "x mean {}", mean.0);
        assert!((mean.1 - 20.0).abs() < 5.0 * sd_y, "y mean {}", mean.1);
    }

    #[test]
    fn representations_agree_away_from_borders() {
        let ds = square_dataset();
        let extent = BoundingBox::new(0.0, 0.0, 12.0, 12.0);
        let spec = GridSpec::from_extent(&extent, 1.0, "");
        let vector = VectorDataset::new(&ds.geoms, 0.5);
        let raster = rasterize_dataset(&ds.geoms, 1, &spec, CoverageRule::area_majority());
        let tree = Quadtree::from_raster(&raster);
        let handles = [
            RepHandle::Vector(&vector),
            RepHandle::Raster(&raster),
            RepHandle::Quadtree(&tree),
        ];
        let points = sample_uniform_points(&extent, 5000, 3);
        let answers: Vec<Vec<bool>> = handles
            .iter()
            .map(|h| pip_batch(h, &points, Execution::Sequential))
            .collect();
        for (i, p) in points.iter().enumerate() {
            // Distance from the square's border, in cells.
            let d = (p.x - 2.0)
                .abs()
                .min((p.x - 10.0).abs())
                .min((p.y - 2.0).abs())
                .min((p.y - 10.0).abs());
            if d > 1.0 {
                assert_eq!(answers[0][i], answers[1][i], "raster disagrees at {p:?}");
                assert_eq!(answers[0][i], answers[2][i], "quadtree disagrees at {p:?}");
            }
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        let ds = square_dataset();
        let vector = VectorDataset::new(&ds.geoms, 0.25);
        let handle = RepHandle::Vector(&vector);
        let extent = BoundingBox::new(0.0, 0.0, 12.0, 12.0);
        let points = sample_uniform_points(&extent, 25_000, 17);
        let seq = pip_batch(&handle, &points, Execution::Sequential);
        let par = pip_batch(&handle, &points, Execution::Parallel);
        assert_eq!(seq, par);
        let (timed, t) = pip_batch_timed(&handle, &points, Execution::Parallel);
        assert_eq!(timed, seq);
        assert!(t.batch_ns > 0);
        assert!(t.per_query_median_ns >= 0.0);
    }

    #[test]
    fn vector_tolerance_matches_lines() {
        let line = Geometry::Polyline(Polyline::new(vec![pt(0.0, 5.0), pt(10.0, 5.0)]).unwrap());
        let geoms = vec![line];
        let d = VectorDataset::new(&geoms, 1.0);
        assert!(d.contains(pt(5.0, 5.9)));
        assert!(d.contains(pt(5.0, 6.0)), "exactly at tolerance");
        assert!(!d.contains(pt(5.0, 6.1)));
    }

    #[test]
    fn conjunction_requires_both() {
        let a = vec![square(0.0, 0.0, 6.0)];
        let b = vec![square(4.0, 0.0, 6.0)];
        let d = VectorDataset::conjunction(&a, &b, 0.0);
        assert!(d.contains(pt(5.0, 1.0)), "overlap region");
        assert!(!d.contains(pt(2.0, 1.0)), "only in a");
        assert!(!d.contains(pt(8.0, 1.0)), "only in b");
    }

    #[test]
    fn median_of_odd_and_even() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
        assert_eq!(median(&mut [7.0]), 7.0);
    }

    #[test]
    fn benchmark_report_shape_and_determinism() {
        let ds = square_dataset();
        let extent = BoundingBox::new(0.0, 0.0, 12.0, 12.0);
        let cfg = BenchConfig {
            resolutions: vec![2.0, 1.0],
            n: 400,
            runs: 3,
            sampler: Sampler::Uniform,
            seed: 5,
            execution: Execution::Sequential,
            rule: CoverageRule::area_majority(),
        };
        let report = run_benchmark(&ds, None, &extent, &cfg).unwrap();
        assert_eq!(report.rows.len(), 2 * 3 * 3, "res x runs x representations");
        for row in &report.rows {
            assert_eq!(row.n, 400);
            assert!(row.run >= 1 && row.run <= 3);
            assert_eq!(
                row.seed,
                5 + row.run as u64,
                "seed column is the derived seed"
            );
            assert!((0.0..=1.0).contains(&row.accuracy));
            match row.representation {
                Representation::Vector => {
                    assert_eq!(row.resolution_m, None);
                    assert_eq!(row.accuracy, 1.0);
                }
                _ => assert!(row.resolution_m.is_some()),
            }
        }
        // Everything except wall-clock timing reproduces exactly.
        let again = run_benchmark(&ds, None, &extent, &cfg).unwrap();
        for (a, b) in report.rows.iter().zip(&again.rows) {
            assert_eq!(a.representation, b.representation);
            assert_eq!(a.resolution_m, b.resolution_m);
            assert_eq!(a.run, b.run);
            assert_eq!(a.seed, b.seed);
            assert_eq!(a.accuracy.to_bits(), b.accuracy.to_bits());
        }
    }

    #[test]
    fn benchmark_with_secondary_matches_conjunction_semantics() {
        let a = Dataset {
            name: "a".into(),
            geoms: vec![square(1.0, 1.0, 6.0)],
            value: 1,
        };
        let b = Dataset {
            name: "b".into(),
            geoms: vec![square(4.0, 1.0, 6.0)],
            value: 2,
        };
        let extent = BoundingBox::new(0.0, 0.0, 12.0, 12.0);
        let cfg = BenchConfig {
            resolutions: vec![1.0],
            n: 2000,
            runs: 1,
            sampler: Sampler::Uniform,
            seed: 77,
            execution: Execution::Sequential,
            rule: CoverageRule::area_majority(),
        };
        let report = run_benchmark(&a, Some(&b), &extent, &cfg).unwrap();
        // Gridded intersection of two clean axis-aligned squares on integer
        // cells differs from vector truth only on boundary sets of measure
        // zero, which uniform samples miss almost surely.
        for row in &report.rows {
            assert!(
                row.accuracy > 0.99,
                "{:?} accuracy {}",
                row.representation,
                row.accuracy
            );
        }
    }

    #[test]
    fn border_sampler_requires_polygons() {
        let line_only = Dataset {
            name: "lines".into(),
            geoms: vec![Geometry::Polyline(
                Polyline::new(vec![pt(0.0, 0.0), pt(5.0, 5.0)]).unwrap(),
            )],
            value: 1,
        };
        let extent = BoundingBox::new(0.0, 0.0, 12.0, 12.0);
        let cfg = BenchConfig {
            resolutions: vec![1.0],
            n: 100,
            runs: 1,
            sampler: Sampler::Border,
            seed: 0,
            execution: Execution::Sequential,
            rule: CoverageRule::area_majority(),
        };
        assert!(matches!(
            run_benchmark(&line_only, None, &extent, &cfg),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn csv_layout_is_stable() {
        let report = BenchReport {
            rows: vec![
                BenchRow {
                    representation: Representation::Vector,
                    resolution_m: None,
                    run: 1,
                    batch_ns: 1234,
                    per_query_median_ns: 56.789,
                    accuracy: 1.0,
                    n: 100,
                    seed: 43,
                },
                BenchRow {
                    representation: Representation::Quadtree,
                    resolution_m: Some(2.5),
                    run: 1,
                    batch_ns: 999,
                    per_query_median_ns: 12.0,
                    accuracy: 0.987654321,
                    n: 100,
                    seed: 43,
                },
            ],
        };
        let mut buf = Vec::new();
        report.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "representation,resolution_m,run,batch_ns,per_query_median_ns,accuracy,n,seed"
        );
        assert_eq!(lines.next().unwrap(), "vector,,1,1234,56.8,1.000000,100,43");
        assert_eq!(
            lines.next().unwrap(),
            "quadtree,2.5,1,999,12.0,0.987654,100,43"
        );
        assert!(!text.contains('\r'));
    }

    #[test]
    fn summaries_pool_medians_and_speedups() {
        let mk = |rep, res: Option<f64>, batch: u64, acc: f64| BenchRow {
            representation: rep,
            resolution_m: res,
            run: 1,
            batch_ns: batch,
            per_query_median_ns: batch as f64 / 100.0,
            accuracy: acc,
            n: 100,
            seed: 1,
        };
        let report = BenchReport {
            rows: vec![
                mk(Representation::Vector, None, 1000, 1.0),
                mk(Representation::Raster, Some(1.0), 200, 0.9),
                mk(Representation::Vector, None, 3000, 1.0),
                mk(Representation::Raster, Some(1.0), 400, 0.7),
                mk(Representation::Vector, None, 2000, 1.0),
                mk(Representation::Raster, Some(2.0), 100, 0.95),
            ],
        };
        let summaries = summarize(&report);
        assert_eq!(summaries.len(), 3);
        let vector = &summaries[0];
        assert_eq!(vector.representation, Representation::Vector);
        assert_eq!(vector.median_batch_ns, 2000.0);
        assert_eq!(vector.speedup_vs_vector, None);
        let raster1 = &summaries[1];
        assert_eq!(raster1.resolution_m, Some(1.0));
        assert_eq!(raster1.median_batch_ns, 300.0);
        assert_eq!(raster1.mean_accuracy, 0.8);
        assert_eq!(raster1.speedup_vs_vector, Some(2000.0 / 300.0));
        let raster2 = &summaries[2];
        assert_eq!(raster2.resolution_m, Some(2.0));
        assert_eq!(raster2.speedup_vs_vector, Some(20.0));
    }

    #[test]
    fn raster_and_tree_answers_are_identical() {
        // Both gridded representations read the same cells, so their answer
        // vectors match bit for bit, not just their accuracy.
        let ds = square_dataset();
        let extent = BoundingBox::new(0.0, 0.0, 12.0, 12.0);
        let spec = GridSpec::from_extent(&extent, 0.5, "");
        let raster = rasterize_dataset(&ds.geoms, 1, &spec, CoverageRule::area_majority());
        let tree = Quadtree::from_raster(&raster);
        let points = sample_uniform_points(&extent, 20_000, 12);
        let ra = pip_batch(&RepHandle::Raster(&raster), &points, Execution::Sequential);
        let qa = pip_batch(&RepHandle::Quadtree(&tree), &points, Execution::Sequential);
        assert_eq!(ra, qa);
    }
}
