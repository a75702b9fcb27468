//! Intersect two rasterized layers directly on their quadtrees, without
//! ever materializing the combined raster, and check the result against
//! the cell-by-cell answer.

use quadrast::{
    dense_polygon_suite, intersect_and, intersect_mask, park_suite, rasterize_dataset,
    rasterize_polygons, suite_extent, CoverageRule, GridSpec, Quadtree,
};

fn covered(tree: &Quadtree) -> usize {
    tree.to_raster()
        .values()
        .iter()
        .filter(|&&v| v != 0)
        .count()
}

fn main() {
    let extent = suite_extent();
    let spec = GridSpec::from_extent(&extent, 4.0, "demo");
    let rule = CoverageRule::area_majority();

    // Layer one: park polygons, category 1. Layer two: a swarm of small
    // habitat patches, category 2.
    let parks = rasterize_polygons(&park_suite(0), 1, &spec, rule);
    let patches = rasterize_dataset(&dense_polygon_suite(40, 400, 5), 2, &spec, rule);

    let ta = Quadtree::from_raster(&parks);
    let tb = Quadtree::from_raster(&patches);
    println!(
        "parks:   {} covered cells, {} tree nodes",
        covered(&ta),
        ta.node_count()
    );
    println!(
        "patches: {} covered cells, {} tree nodes",
        covered(&tb),
        tb.node_count()
    );

    // AND keeps a cell when both layers cover it; MASK keeps the first
    // layer's category code wherever the second layer is present.
    let both = intersect_and(&ta, &tb).unwrap();
    let parks_in_patches = intersect_mask(&ta, &tb).unwrap();
    println!(
        "parks AND patches:    {} cells, {} nodes",
        covered(&both),
        both.node_count()
    );
    println!(
        "parks MASK patches:   {} cells, {} nodes",
        covered(&parks_in_patches),
        parks_in_patches.node_count()
    );

    let values: std::collections::BTreeSet<i32> = parks_in_patches
        .to_raster()
        .values()
        .iter()
        .copied()
        .filter(|&v| v != 0)
        .collect();
    println!("mask output carries the park code only: {values:?}");

    // The tree-level walk must agree exactly with combining the rasters
    // cell by cell and rebuilding.
    let oracle = parks
        .combine(&patches, |x, y| i32::from(x != 0 && y != 0))
        .unwrap();
    assert_eq!(both, Quadtree::from_raster(&oracle));
    println!("tree intersection matches the cellwise combine");

    // Merging after the walk means the output can be smaller than either
    // input wherever the overlap is uniform.
    println!(
        "node counts: a {} b {} and {} (never larger than the aligned pair)",
        ta.node_count(),
        tb.node_count(),
        both.node_count()
    );
}
