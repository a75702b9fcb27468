//! Categorical grids and region quadtrees for fast point-membership queries.
//!
//! The pipeline has three stages. Vector geometry (points, polylines,
//! polygons with holes) is rasterized onto a regular grid of `i32` category
//! codes under an explicit coverage rule. The raster is then compressed into
//! a value quadtree that merges uniform regions into single leaves. Either
//! gridded form answers "what value covers this point" lookups; the quadtree
//! additionally supports intersection with another tree over the same grid
//! without expanding back to cells.
//!
//! Grids are top-left anchored with square cells and cover the half-open
//! extent `[xmin, xmax) x (ymin, ymax]`. Rasterization is exact: polygon
//! coverage per cell is accumulated analytically from the edges, not
//! estimated by sampling. A cell is set under the default rule only when
//! strictly more than half its area is covered.
//!
//! ```
//! use quadrast::{BoundingBox, CoverageRule, GridSpec, MultiPolygon, Point, Polygon, Quadtree};
//!
//! let square = Polygon::new(
//!     vec![
//!         Point::new(2.0, 2.0),
//!         Point::new(10.0, 2.0),
//!         Point::new(10.0, 10.0),
//!         Point::new(2.0, 10.0),
//!         Point::new(2.0, 2.0),
//!     ],
//!     vec![],
//! )?;
//! let mp = MultiPolygon::new(vec![square])?;
//! let spec = GridSpec::from_extent(&BoundingBox::new(0.0, 0.0, 16.0, 16.0), 1.0, "local");
//! let raster = quadrast::rasterize_polygons(&mp, 7, &spec, CoverageRule::area_majority());
//! let tree = Quadtree::from_raster(&raster);
//!
//! assert_eq!(tree.value_at(Point::new(5.0, 5.0)), Some(7));
//! assert_eq!(tree.to_raster(), raster);
//! # Ok::<(), quadrast::Error>(())
//! ```
//!
//! The [`analysis`] module compares representations on the same query
//! batches (vector answers are the accuracy baseline), [`io`] reads and
//! writes the file formats, [`synthetic`] generates reproducible test
//! suites, and [`cli`] exposes everything as subcommands.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod grid;
pub mod io;
pub mod quadtree;
pub mod rasterize;
pub mod synthetic;

pub use analysis::{
    accuracy, pip_batch, pip_batch_timed, run_benchmark, sample_uniform_points, summarize,
    AccuracyReport, BatchTiming, BenchConfig, BenchReport, BenchRow, Execution, RepHandle,
    Representation, Sampler, Summary, VectorDataset,
};
pub use error::{Error, Result};
pub use geometry::{
    sample_boundary_points, Boundary, BoundingBox, Geometry, MultiPolygon, Point, Polygon,
    Polyline, BOUNDARY_EPS,
};
pub use grid::{CellIndex, GridSpec, Raster, DEFAULT_NODATA};
pub use io::{
    read_ascii_grid, read_geojson, read_quadtree, write_ascii_grid, write_geojson, write_quadtree,
    Dataset,
};
pub use quadtree::{intersect, intersect_and, intersect_mask, QuadNode, Quadtree};
pub use rasterize::{
    polygon_coverage, rasterize_dataset, rasterize_points, rasterize_polygons, rasterize_polyline,
    CoverageRule,
};
pub use synthetic::{dense_polygon_suite, park_suite, suite_extent, trajectories};
