//! Command-line front end: rasterize datasets, build and inspect quadtree
//! files, intersect them, run point queries, and benchmark representations.
//!
//! [`run`] is the whole interface; the binary just hands it `std::env::args`.
//! Exit codes: 0 on success (and for `--help`/`--version`), 2 for argument
//! errors, 1 for runtime failures.

use std::ffi::OsString;
use std::fs::File;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{
    run_benchmark, summarize, BenchConfig, Execution, RepHandle, Sampler, VectorDataset,
};
use crate::error::{Error, Result};
use crate::geometry::{BoundingBox, Geometry, Point};
use crate::grid::{GridSpec, Raster};
use crate::io::{
    read_ascii_grid, read_geojson, read_quadtree, write_ascii_grid, write_quadtree, Dataset,
};
use crate::quadtree::{intersect_and, intersect_mask, Quadtree};
use crate::rasterize::{rasterize_dataset, CoverageRule};

#[derive(Parser)]
#[command(
    name = "quadrast",
    version,
    about = "Rasterize vector datasets, compress them into quadtrees, and query either"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rasterize a GeoJSON dataset onto a grid and write an ASCII grid file.
    Rasterize(RasterizeArgs),
    /// Build or inspect quadtree files.
    Qtree {
        #[command(subcommand)]
        cmd: QtreeCmd,
    },
    /// Intersect two quadtree files over the same grid.
    Intersect(IntersectArgs),
    /// Evaluate point queries against a stored representation.
    Query(QueryArgs),
    /// Time point-query batches across representations and write a CSV.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RuleArg {
    /// Cell is covered when strictly more than half its area is.
    Area50,
    /// Cell is covered when its center point is.
    Center,
}

impl From<RuleArg> for CoverageRule {
    fn from(rule: RuleArg) -> CoverageRule {
        match rule {
            RuleArg::Area50 => CoverageRule::area_majority(),
            RuleArg::Center => CoverageRule::CenterInPolygon,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SampleArg {
    Uniform,
    Border,
}

impl From<SampleArg> for Sampler {
    fn from(sample: SampleArg) -> Sampler {
        match sample {
            SampleArg::Uniform => Sampler::Uniform,
            SampleArg::Border => Sampler::Border,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OpArg {
    /// 1 where both inputs are nonzero, else 0.
    And,
    /// Keep the first input's value where the second is nonzero, else 0.
    Mask,
}

#[derive(Args)]
struct RasterizeArgs {
    /// Input GeoJSON FeatureCollection.
    #[arg(long)]
    input: PathBuf,
    /// Grid extent as xmin,ymin,xmax,ymax.
    #[arg(long, value_parser = parse_extent)]
    extent: BoundingBox,
    /// Cell size in meters.
    #[arg(long, value_parser = parse_positive)]
    res: f64,
    /// Polygon coverage rule.
    #[arg(long, value_enum, default_value_t = RuleArg::Area50)]
    rule: RuleArg,
    /// Output ASCII grid path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum QtreeCmd {
    /// Build a quadtree from an ASCII grid raster.
    Build {
        /// Input ASCII grid.
        #[arg(long)]
        raster: PathBuf,
        /// Output quadtree file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Print size and shape statistics of a quadtree file.
    Stats {
        /// Input quadtree file.
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Args)]
struct IntersectArgs {
    /// First quadtree file.
    #[arg(long)]
    a: PathBuf,
    /// Second quadtree file; must share the first one's grid.
    #[arg(long)]
    b: PathBuf,
    /// Combining operation.
    #[arg(long, value_enum)]
    op: OpArg,
    /// Output quadtree file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct QueryArgs {
    /// Representation to query: .qt, .asc, or .geojson, by extension.
    #[arg(long)]
    index: PathBuf,
    /// GeoJSON FeatureCollection of Point features to evaluate.
    #[arg(long)]
    points: PathBuf,
    /// Match tolerance in meters for vector queries.
    #[arg(long, default_value_t = 0.0, value_parser = parse_nonnegative)]
    tol: f64,
    /// Output CSV of x,y,hit rows.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Primary GeoJSON dataset.
    #[arg(long)]
    vector: PathBuf,
    /// Optional second dataset; queries then ask for membership in both.
    #[arg(long)]
    vector2: Option<PathBuf>,
    /// Shared extent as xmin,ymin,xmax,ymax.
    #[arg(long, value_parser = parse_extent)]
    extent: BoundingBox,
    /// Comma-separated cell sizes in meters, e.g. 1,2,5,20.
    #[arg(long, value_delimiter = ',', required = true, value_parser = parse_positive)]
    res: Vec<f64>,
    /// Points per batch.
    #[arg(long, default_value_t = 100_000)]
    n: usize,
    /// Timed runs per resolution.
    #[arg(long, default_value_t = 30)]
    runs: u32,
    /// Where query points are drawn.
    #[arg(long, value_enum, default_value_t = SampleArg::Uniform)]
    sample: SampleArg,
    /// Base RNG seed; run r draws with seed+r.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Evaluate batches on one thread instead of in parallel.
    #[arg(long)]
    sequential: bool,
    /// Polygon coverage rule for the gridded representations.
    #[arg(long, value_enum, default_value_t = RuleArg::Area50)]
    rule: RuleArg,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

fn parse_extent(s: &str) -> std::result::Result<BoundingBox, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err(format!(
            "expected xmin,ymin,xmax,ymax, got {} fields",
            parts.len()
        ));
    }
    let mut vals = [0.0f64; 4];
    for (slot, part) in vals.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse::<f64>()
            .map_err(|_| format!("not a number: {part:?}"))?;
        if !slot.is_finite() {
            return Err(format!("not finite: {part:?}"));
        }
    }
    let [xmin, ymin, xmax, ymax] = vals;
    if xmin >= xmax || ymin >= ymax {
        return Err(format!("degenerate extent {xmin},{ymin},{xmax},{ymax}"));
    }
    Ok(BoundingBox::new(xmin, ymin, xmax, ymax))
}

fn parse_positive(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("not a number: {s:?}"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("must be positive, got {s}"))
    }
}

fn parse_nonnegative(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("not a number: {s:?}"))?;
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(format!("must be zero or positive, got {s}"))
    }
}

/// Parses `args` and runs the requested subcommand, returning the process
/// exit code instead of exiting, so tests can drive it in-process.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Rasterize(args) => cmd_rasterize(args),
        Command::Qtree { cmd } => match cmd {
            QtreeCmd::Build { raster, out } => cmd_qtree_build(&raster, &out),
            QtreeCmd::Stats { input } => cmd_qtree_stats(&input),
        },
        Command::Intersect(args) => cmd_intersect(args),
        Command::Query(args) => cmd_query(args),
        Command::Bench(args) => cmd_bench(args),
    };
    match outcome {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            1
        }
    }
}

fn covered_cells(raster: &Raster) -> usize {
    let nodata = raster.nodata();
    raster
        .values()
        .iter()
        .filter(|&&v| v != 0 && v != nodata)
        .count()
}

fn cmd_rasterize(args: RasterizeArgs) -> Result<()> {
    let ds = read_geojson(&args.input)?;
    let spec = GridSpec::from_extent(&args.extent, args.res, "");
    let raster = rasterize_dataset(&ds.geoms, ds.value, &spec, args.rule.into());
    write_ascii_grid(&raster, &args.out)?;
    println!(
        "{}: {} geometries (value {}) -> {} x {} cells at {} m, {} covered, written to {}",
        ds.name,
        ds.geoms.len(),
        ds.value,
        spec.ncols,
        spec.nrows,
        spec.resolution,
        covered_cells(&raster),
        args.out.display()
    );
    Ok(())
}

fn print_stats(label: &str, tree: &Quadtree) {
    let spec = tree.spec();
    println!("{label}:");
    println!(
        "  grid: {} x {} cells at {} m",
        spec.ncols, spec.nrows, spec.resolution
    );
    println!("  origin: ({}, {})", spec.xmin, spec.ymax);
    println!("  padded side: {}", tree.side());
    println!("  nodes: {}", tree.node_count());
    println!("  leaves: {}", tree.leaf_count());
    println!("  depth: {}", tree.depth());
    println!("  cells: {}", spec.cell_count());
    println!("  leaves per cell: {:.6}", tree.compression_ratio());
}

fn cmd_qtree_build(raster_path: &Path, out: &Path) -> Result<()> {
    let raster = read_ascii_grid(raster_path)?;
    let tree = Quadtree::from_raster(&raster);
    write_quadtree(&tree, out)?;
    print_stats(&format!("{}", out.display()), &tree);
    Ok(())
}

fn cmd_qtree_stats(input: &Path) -> Result<()> {
    let tree = read_quadtree(input)?;
    print_stats(&format!("{}", input.display()), &tree);
    Ok(())
}

fn cmd_intersect(args: IntersectArgs) -> Result<()> {
    let a = read_quadtree(&args.a)?;
    let b = read_quadtree(&args.b)?;
    let result = match args.op {
        OpArg::And => intersect_and(&a, &b)?,
        OpArg::Mask => intersect_mask(&a, &b)?,
    };
    write_quadtree(&result, &args.out)?;
    println!(
        "intersected {} ({} nodes) with {} ({} nodes): {} nodes -> {}",
        args.a.display(),
        a.node_count(),
        args.b.display(),
        b.node_count(),
        result.node_count(),
        args.out.display()
    );
    Ok(())
}

enum IndexFile {
    Vector(Dataset),
    Raster(Raster),
    Quadtree(Quadtree),
}

fn load_index(path: &Path) -> Result<IndexFile> {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase)
        .unwrap_or_default();
    match ext.as_str() {
        "qt" => Ok(IndexFile::Quadtree(read_quadtree(path)?)),
        "asc" => Ok(IndexFile::Raster(read_ascii_grid(path)?)),
        "geojson" | "json" => Ok(IndexFile::Vector(read_geojson(path)?)),
        other => Err(Error::InvalidInput(format!(
            "cannot infer representation from extension {other:?}; use .qt, .asc, or .geojson"
        ))),
    }
}

fn read_query_points(path: &Path) -> Result<Vec<Point>> {
    let ds = read_geojson(path)?;
    let kind_name = |g: &Geometry| match g {
        Geometry::Point(_) => "Point",
        Geometry::Polyline(_) => "LineString",
        Geometry::MultiPolygon(_) => "polygon",
    };
    ds.geoms
        .iter()
        .map(|g| match g {
            Geometry::Point(p) => Ok(*p),
            other => Err(Error::InvalidInput(format!(
                "query points file must contain only Point features, found {}",
                kind_name(other)
            ))),
        })
        .collect()
}

fn cmd_query(args: QueryArgs) -> Result<()> {
    let index = load_index(&args.index)?;
    let points = read_query_points(&args.points)?;
    let vector;
    let handle = match &index {
        IndexFile::Vector(ds) => {
            vector = VectorDataset::new(&ds.geoms, args.tol);
            RepHandle::Vector(&vector)
        }
        IndexFile::Raster(r) => RepHandle::Raster(r),
        IndexFile::Quadtree(t) => RepHandle::Quadtree(t),
    };
    let mut hits = 0usize;
    let mut file = File::create(&args.out)?;
    writeln!(file, "x,y,hit")?;
    for p in &points {
        let hit = handle.eval(*p);
        hits += usize::from(hit);
        writeln!(file, "{},{},{}", p.x, p.y, hit)?;
    }
    println!(
        "{} of {} points covered per {} ({}) -> {}",
        hits,
        points.len(),
        args.index.display(),
        handle.kind().as_str(),
        args.out.display()
    );
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    let primary = read_geojson(&args.vector)?;
    let secondary = match &args.vector2 {
        Some(path) => Some(read_geojson(path)?),
        None => None,
    };
    let cfg = BenchConfig {
        resolutions: args.res.clone(),
        n: args.n,
        runs: args.runs,
        sampler: args.sample.into(),
        seed: args.seed,
        execution: if args.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        },
        rule: args.rule.into(),
    };
    let report = run_benchmark(&primary, secondary.as_ref(), &args.extent, &cfg)?;
    let mut file = File::create(&args.out)?;
    report.write_csv(&mut file)?;
    println!(
        "{} rows ({} runs x {} resolutions) -> {}",
        report.rows.len(),
        cfg.runs,
        cfg.resolutions.len(),
        args.out.display()
    );
    println!(
        "{:<10} {:>10} {:>12} {:>14} {:>9} {:>9}",
        "rep", "res_m", "batch_ms", "per_query_ns", "accuracy", "speedup"
    );
    for s in summarize(&report) {
        let res = s
            .resolution_m
            .map(|r| r.to_string())
            .unwrap_or_else(|| "-".to_string());
        let speedup = match s.speedup_vs_vector {
            None => "baseline".to_string(),
            Some(x) => format!("{x:.2}x"),
        };
        println!(
            "{:<10} {:>10} {:>12.3} {:>14.1} {:>9.6} {:>9}",
            s.representation.as_str(),
            res,
            s.median_batch_ns / 1e6,
            s.median_per_query_ns,
            s.mean_accuracy,
            speedup
        );
    }
    Ok(())
}
