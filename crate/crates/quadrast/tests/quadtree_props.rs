//! Structural properties of the quadtree over randomized rasters.

use proptest::prelude::*;

use quadrast::{intersect, GridSpec, Point, QuadNode, Quadtree, Raster, DEFAULT_NODATA};

fn raster_strategy(max_dim: usize) -> impl Strategy<Value = Raster> {
    (1..=max_dim, 1..=max_dim)
        .prop_flat_map(|(ncols, nrows)| {
            let values = prop::collection::vec(
                prop_oneof![Just(DEFAULT_NODATA), Just(0), Just(1), Just(2), Just(3)],
                ncols * nrows,
            );
            (Just(ncols), Just(nrows), values)
        })
        .prop_map(|(ncols, nrows, values)| {
            let spec = GridSpec::new(0.0, nrows as f64, 1.0, ncols, nrows, "test");
            Raster::new(spec, values, DEFAULT_NODATA)
        })
}

/// Two rasters over one shared grid.
fn raster_pair_strategy(max_dim: usize) -> impl Strategy<Value = (Raster, Raster)> {
    (1..=max_dim, 1..=max_dim)
        .prop_flat_map(|(ncols, nrows)| {
            let cell = prop_oneof![Just(DEFAULT_NODATA), Just(0), Just(1), Just(2), Just(3)];
            let a = prop::collection::vec(cell.clone(), ncols * nrows);
            let b = prop::collection::vec(cell, ncols * nrows);
            (Just(ncols), Just(nrows), a, b)
        })
        .prop_map(|(ncols, nrows, a, b)| {
            let spec = GridSpec::new(0.0, nrows as f64, 1.0, ncols, nrows, "test");
            (
                Raster::new(spec.clone(), a, DEFAULT_NODATA),
                Raster::new(spec, b, DEFAULT_NODATA),
            )
        })
}

fn is_canonical(node: &QuadNode) -> bool {
    match node {
        QuadNode::Leaf(_) => true,
        QuadNode::Internal(kids) => {
            let collapsible = match (&kids[0], &kids[1], &kids[2], &kids[3]) {
                (QuadNode::Leaf(a), QuadNode::Leaf(b), QuadNode::Leaf(c), QuadNode::Leaf(d)) => {
                    a == b && b == c && c == d
                }
                _ => false,
            };
            !collapsible && kids.iter().all(is_canonical)
        }
    }
}

proptest! {
    #[test]
    fn round_trip_is_exact(raster in raster_strategy(48)) {
        let tree = Quadtree::from_raster(&raster);
        prop_assert_eq!(tree.to_raster(), raster);
    }

    #[test]
    fn built_trees_are_canonical(raster in raster_strategy(48)) {
        let tree = Quadtree::from_raster(&raster);
        prop_assert!(is_canonical(tree.root()), "found four equal leaf siblings");
    }

    #[test]
    fn every_cell_center_query_matches(raster in raster_strategy(24)) {
        let tree = Quadtree::from_raster(&raster);
        let spec = raster.spec();
        for row in 0..spec.nrows {
            for col in 0..spec.ncols {
                let p = spec.cell_center(quadrast::CellIndex { row, col });
                prop_assert_eq!(tree.value_at(p), raster.value_at(p));
            }
        }
    }

    #[test]
    fn descent_never_exceeds_depth_bound(raster in raster_strategy(48)) {
        let tree = Quadtree::from_raster(&raster);
        let bound = (tree.side().ilog2() + 1) as usize;
        let spec = raster.spec();
        for row in 0..spec.nrows {
            for col in (0..spec.ncols).step_by(3) {
                let p = spec.cell_center(quadrast::CellIndex { row, col });
                let (_, visits) = tree.value_at_with_visits(p);
                prop_assert!(visits <= bound, "{visits} visits exceeds {bound}");
            }
        }
        // Outside the data extent nothing is visited.
        let (v, n) = tree.value_at_with_visits(Point::new(-1.0, 0.5));
        prop_assert_eq!(v, None);
        prop_assert_eq!(n, 0);
    }

    #[test]
    fn intersection_matches_cellwise_combine((a, b) in raster_pair_strategy(32)) {
        let ta = Quadtree::from_raster(&a);
        let tb = Quadtree::from_raster(&b);
        // Mask keeps left values, so mistakes in child ordering or nodata
        // handling change the output; AND would hide the former.
        let f = |x: i32, y: i32| if y != 0 { x } else { 0 };
        let combined = a.combine(&b, f).unwrap();
        let direct = intersect(&ta, &tb, f).unwrap();
        prop_assert_eq!(&direct, &Quadtree::from_raster(&combined));
        prop_assert_eq!(direct.to_raster(), combined);
        prop_assert!(is_canonical(direct.root()));
    }

    #[test]
    fn uniform_iff_single_leaf(raster in raster_strategy(32)) {
        let tree = Quadtree::from_raster(&raster);
        let uniform = raster.values().iter().all(|v| *v == raster.values()[0]);
        prop_assert_eq!(tree.leaf_count() == 1, uniform);
        if uniform {
            prop_assert_eq!(tree.node_count(), 1);
            prop_assert_eq!(tree.depth(), 0);
        }
    }
}

#[test]
fn compression_ratio_is_leaves_per_cell() {
    let spec = GridSpec::new(0.0, 64.0, 1.0, 64, 64, "");
    let uniform = Raster::filled(spec.clone(), 5, DEFAULT_NODATA);
    let tree = Quadtree::from_raster(&uniform);
    assert_eq!(tree.compression_ratio(), 1.0 / 4096.0);

    let mut worst = Raster::zeroed(spec);
    for row in 0..64 {
        for col in 0..64 {
            worst.set(quadrast::CellIndex { row, col }, ((row + col) % 2) as i32);
        }
    }
    let tree = Quadtree::from_raster(&worst);
    assert_eq!(tree.leaf_count(), 4096);
    assert_eq!(tree.compression_ratio(), 1.0);
}
