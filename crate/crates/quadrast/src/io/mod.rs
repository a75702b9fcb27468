//! File formats: GeoJSON feature collections, ESRI ASCII grids, and a
//! plain-text quadtree serialization.

mod ascii_grid;
mod geojson;
mod quadtree_file;

pub use ascii_grid::{read_ascii_grid, write_ascii_grid};
pub use geojson::{read_geojson, write_geojson};
pub use quadtree_file::{read_quadtree, write_quadtree};

use crate::geometry::Geometry;

/// A named collection of geometries sharing one category code.
///
/// Readers guarantee `geoms` is nonempty and `value` is positive; zero is
/// the universal "not covered" cell value and negative codes are reserved
/// for nodata markers.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub geoms: Vec<Geometry>,
    pub value: i32,
}
