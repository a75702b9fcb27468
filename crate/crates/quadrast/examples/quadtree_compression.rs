//! How well the quadtree compresses rasters with large uniform regions,
//! from the two extremes (solid color, checkerboard) to a realistic
//! park-style land cover layer at several resolutions.

use quadrast::{
    park_suite, rasterize_polygons, suite_extent, CoverageRule, GridSpec, Quadtree, Raster,
};

fn report(label: &str, tree: &Quadtree) {
    let cells = tree.spec().cell_count();
    println!(
        "{label:<28} {:>9} cells  {:>8} nodes  {:>8} leaves  depth {:>2}  leaves/cell {:.5}",
        cells,
        tree.node_count(),
        tree.leaf_count(),
        tree.depth(),
        tree.leaf_count() as f64 / cells as f64
    );
}

fn main() {
    // The extremes first. A uniform raster collapses to a single leaf no
    // matter how large it is, while a checkerboard alternates every cell
    // and cannot merge anything.
    let side = 256;
    let spec = GridSpec::new(0.0, side as f64, 1.0, side, side, "demo");
    report(
        "uniform 256x256",
        &Quadtree::from_raster(&Raster::filled(spec.clone(), 7, -1)),
    );

    let board: Vec<i32> = (0..side * side)
        .map(|i| ((i / side + i % side) % 2) as i32)
        .collect();
    report(
        "checkerboard 256x256",
        &Quadtree::from_raster(&Raster::new(spec, board, -1)),
    );
    println!();

    // A synthetic park map: a handful of blobby polygons on a 2048 m square.
    // Detail only exists along the boundaries, so the leaf count grows far
    // slower than the cell count as the grid gets finer.
    let park = park_suite(0);
    let extent = suite_extent();
    for res in [20.0, 5.0, 2.0, 1.0] {
        let spec = GridSpec::from_extent(&extent, res, "park");
        let raster = rasterize_polygons(&park, 1, &spec, CoverageRule::area_majority());
        report(&format!("park at {res} m"), &Quadtree::from_raster(&raster));
    }
}
