//! Regular grids anchored at a top-left origin, and dense rasters over them.
//!
//! A grid covers the half-open extent `[xmin, xmax) x (ymin, ymax]`: row 0 is
//! the top row, and a point on the left or top edge of a cell belongs to that
//! cell. Cell values are `i32` category codes; one value per raster is
//! reserved as nodata.

use crate::error::{Error, Result};
use crate::geometry::{BoundingBox, Point};

/// Nodata marker used by constructors that do not take one explicitly.
pub const DEFAULT_NODATA: i32 = -1;

/// Coordinate slop when deciding whether two grids share a geometry.
const ALIGNMENT_EPS: f64 = 1e-9;

/// Placement of a regular grid: top-left corner, square cell size in meters,
/// dimensions, and an opaque CRS label that is compared, never interpreted.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub xmin: f64,
    pub ymax: f64,
    pub resolution: f64,
    pub ncols: usize,
    pub nrows: usize,
    pub crs_id: String,
}

/// Row/column address of one cell; row 0 is the top row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CellIndex {
    pub row: usize,
    pub col: usize,
}

impl GridSpec {
    pub fn new(
        xmin: f64,
        ymax: f64,
        resolution: f64,
        ncols: usize,
        nrows: usize,
        crs_id: impl Into<String>,
    ) -> Self {
        assert!(
            xmin.is_finite() && ymax.is_finite(),
            "non-finite grid origin"
        );
        assert!(
            resolution.is_finite() && resolution > 0.0,
            "resolution must be positive, got {resolution}"
        );
        assert!(ncols > 0 && nrows > 0, "empty grid: {ncols} x {nrows}");
        GridSpec {
            xmin,
            ymax,
            resolution,
            ncols,
            nrows,
            crs_id: crs_id.into(),
        }
    }

    /// Smallest grid at `resolution` that covers `extent`, top-left anchored
    /// at the extent's top-left corner.
    pub fn from_extent(extent: &BoundingBox, resolution: f64, crs_id: impl Into<String>) -> Self {
        assert!(
            resolution.is_finite() && resolution > 0.0,
            "resolution must be positive, got {resolution}"
        );
        let ncols = ((extent.width() / resolution).ceil() as usize).max(1);
        let nrows = ((extent.height() / resolution).ceil() as usize).max(1);
        GridSpec::new(extent.xmin, extent.ymax, resolution, ncols, nrows, crs_id)
    }

    pub fn xmax(&self) -> f64 {
        self.xmin + self.ncols as f64 * self.resolution
    }

    pub fn ymin(&self) -> f64 {
        self.ymax - self.nrows as f64 * self.resolution
    }

    pub fn extent(&self) -> BoundingBox {
        BoundingBox::new(self.xmin, self.ymin(), self.xmax(), self.ymax)
    }

    pub fn cell_count(&self) -> usize {
        self.ncols * self.nrows
    }

    /// Cell containing `p`, or `None` when `p` falls outside the extent
    /// (including NaN coordinates). Containment is half-open: the left and
    /// top edges of the extent are in, the right and bottom edges are out.
    pub fn cell_of(&self, p: Point) -> Option<CellIndex> {
        let fx = (p.x - self.xmin) / self.resolution;
        let fy = (self.ymax - p.y) / self.resolution;
        // Comparisons are false for NaN, so NaN points fall out here.
        if !(fx >= 0.0) || !(fy >= 0.0) {
            return None;
        }
        let col = fx.floor() as usize;
        let row = fy.floor() as usize;
        if col >= self.ncols || row >= self.nrows {
            return None;
        }
        Some(CellIndex { row, col })
    }

    /// World-coordinate rectangle of a cell. Panics when `c` is out of range.
    pub fn cell_bounds(&self, c: CellIndex) -> BoundingBox {
        assert!(
            c.row < self.nrows && c.col < self.ncols,
            "cell ({}, {}) outside {} x {} grid",
            c.row,
            c.col,
            self.nrows,
            self.ncols
        );
        let x0 = self.xmin + c.col as f64 * self.resolution;
        let y1 = self.ymax - c.row as f64 * self.resolution;
        BoundingBox::new(x0, y1 - self.resolution, x0 + self.resolution, y1)
    }

    /// Center of a cell. Panics when `c` is out of range.
    pub fn cell_center(&self, c: CellIndex) -> Point {
        assert!(
            c.row < self.nrows && c.col < self.ncols,
            "cell ({}, {}) outside {} x {} grid",
            c.row,
            c.col,
            self.nrows,
            self.ncols
        );
        Point::new(
            self.xmin + (c.col as f64 + 0.5) * self.resolution,
            self.ymax - (c.row as f64 + 0.5) * self.resolution,
        )
    }

    /// True when the two grids describe the same cells: identical dimensions
    /// and CRS, with origin and resolution equal within a small absolute
    /// tolerance to absorb round-tripping through text formats.
    pub fn aligned_with(&self, other: &GridSpec) -> bool {
        self.ncols == other.ncols
            && self.nrows == other.nrows
            && self.crs_id == other.crs_id
            && (self.xmin - other.xmin).abs() <= ALIGNMENT_EPS
            && (self.ymax - other.ymax).abs() <= ALIGNMENT_EPS
            && (self.resolution - other.resolution).abs() <= ALIGNMENT_EPS
    }
}

/// Dense row-major grid of category codes.
#[derive(Debug, Clone, PartialEq)]
pub struct Raster {
    spec: GridSpec,
    values: Vec<i32>,
    nodata: i32,
}

impl Raster {
    /// Wraps an existing buffer; `values.len()` must equal the cell count.
    pub fn new(spec: GridSpec, values: Vec<i32>, nodata: i32) -> Self {
        assert_eq!(
            values.len(),
            spec.cell_count(),
            "value buffer does not match grid dimensions"
        );
        Raster {
            spec,
            values,
            nodata,
        }
    }

    pub fn filled(spec: GridSpec, value: i32, nodata: i32) -> Self {
        let n = spec.cell_count();
        Raster {
            spec,
            values: vec![value; n],
            nodata,
        }
    }

    /// All-zero raster with the default nodata marker.
    pub fn zeroed(spec: GridSpec) -> Self {
        Self::filled(spec, 0, DEFAULT_NODATA)
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[i32] {
        &self.values
    }

    pub fn nodata(&self) -> i32 {
        self.nodata
    }

    pub fn get(&self, c: CellIndex) -> i32 {
        assert!(c.row < self.spec.nrows && c.col < self.spec.ncols);
        self.values[c.row * self.spec.ncols + c.col]
    }

    pub fn set(&mut self, c: CellIndex, value: i32) {
        assert!(c.row < self.spec.nrows && c.col < self.spec.ncols);
        self.values[c.row * self.spec.ncols + c.col] = value;
    }

    /// Value of the cell containing `p`; `None` outside the extent or where
    /// the cell holds nodata.
    pub fn value_at(&self, p: Point) -> Option<i32> {
        let c = self.spec.cell_of(p)?;
        let v = self.values[c.row * self.spec.ncols + c.col];
        if v == self.nodata {
            None
        } else {
            Some(v)
        }
    }

    /// Cellwise combination of two rasters on the same grid. Where either
    /// side is nodata the result is nodata; elsewhere `f(a, b)`. The result
    /// keeps `self`'s nodata marker.
    pub fn combine(&self, other: &Raster, mut f: impl FnMut(i32, i32) -> i32) -> Result<Raster> {
        if !self.spec.aligned_with(other.spec()) {
            return Err(Error::Misaligned(format!(
                "{}x{} at ({}, {}) res {} vs {}x{} at ({}, {}) res {}",
                self.spec.ncols,
                self.spec.nrows,
                self.spec.xmin,
                self.spec.ymax,
                self.spec.resolution,
                other.spec.ncols,
                other.spec.nrows,
                other.spec.xmin,
                other.spec.ymax,
                other.spec.resolution,
            )));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| {
                if a == self.nodata || b == other.nodata {
                    self.nodata
                } else {
                    f(a, b)
                }
            })
            .collect();
        Ok(Raster {
            spec: self.spec.clone(),
            values,
            nodata: self.nodata,
        })
    }
}
