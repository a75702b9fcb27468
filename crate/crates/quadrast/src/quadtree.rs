//! Region quadtrees over categorical rasters.
//!
//! The tree covers a power-of-two square that pads the raster on the right
//! and bottom; padding cells carry the nodata value and merge away into
//! large uniform leaves. Construction collapses every uniform region, so a
//! tree is always in canonical form: no internal node has four leaf
//! children with equal values. Lookups descend from the root in at most
//! `log2(side) + 1` node visits.
//!
//! Two trees on the same grid combine leafwise without rasterizing: a leaf
//! stands in as its own child during simultaneous descent, and results are
//! re-merged, so the outcome is structurally identical to rebuilding from
//! the cellwise-combined rasters.

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::grid::{CellIndex, GridSpec, Raster};

/// One node: a uniform region, or four quadrants ordered NW, NE, SW, SE.
#[derive(Debug, Clone, PartialEq)]
pub enum QuadNode {
    Leaf(i32),
    Internal(Box<[QuadNode; 4]>),
}

/// Region quadtree for one raster grid.
#[derive(Debug, Clone)]
pub struct Quadtree {
    spec: GridSpec,
    nodata: i32,
    side: usize,
    root: QuadNode,
    flat: Vec<FlatNode>,
}

/// Two trees are equal when they describe the same grid and structure; the
/// flattened index is derived from the rest and never compared.
impl PartialEq for Quadtree {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
            && self.nodata == other.nodata
            && self.side == other.side
            && self.root == other.root
    }
}

/// Descent-optimized mirror of one node. Children of an internal node sit
/// contiguously, laid out breadth first so the top of the tree, which every
/// lookup crosses, packs into a few cache lines. `child == FLAT_LEAF` marks
/// a leaf holding `value`.
#[derive(Debug, Clone, Copy)]
struct FlatNode {
    child: u32,
    value: i32,
}

const FLAT_LEAF: u32 = u32::MAX;

fn flatten(root: &QuadNode) -> Vec<FlatNode> {
    let mut flat = vec![FlatNode {
        child: FLAT_LEAF,
        value: 0,
    }];
    let mut queue = std::collections::VecDeque::new();
    queue.push_back((0usize, root));
    while let Some((slot, node)) = queue.pop_front() {
        match node {
            QuadNode::Leaf(v) => {
                flat[slot] = FlatNode {
                    child: FLAT_LEAF,
                    value: *v,
                }
            }
            QuadNode::Internal(kids) => {
                let base = flat.len();
                assert!(base + 4 < FLAT_LEAF as usize, "tree too large to index");
                flat[slot] = FlatNode {
                    child: base as u32,
                    value: 0,
                };
                flat.resize(
                    base + 4,
                    FlatNode {
                        child: FLAT_LEAF,
                        value: 0,
                    },
                );
                for (i, kid) in kids.iter().enumerate() {
                    queue.push_back((base + i, kid));
                }
            }
        }
    }
    flat
}

fn side_for(ncols: usize, nrows: usize) -> usize {
    let mut side = 1usize;
    while side < ncols.max(nrows) {
        side *= 2;
    }
    side
}

fn merged(kids: [QuadNode; 4]) -> QuadNode {
    if let [QuadNode::Leaf(a), QuadNode::Leaf(b), QuadNode::Leaf(c), QuadNode::Leaf(d)] = &kids {
        if a == b && b == c && c == d {
            return QuadNode::Leaf(*a);
        }
    }
    QuadNode::Internal(Box::new(kids))
}

/// A leaf represents a uniform region, so it serves as each of its own
/// quadrants during simultaneous descent.
fn child<'a>(n: &'a QuadNode, i: usize) -> &'a QuadNode {
    match n {
        QuadNode::Leaf(_) => n,
        QuadNode::Internal(kids) => &kids[i],
    }
}

impl Quadtree {
    /// Builds the canonical tree for a raster.
    pub fn from_raster(raster: &Raster) -> Quadtree {
        fn build(raster: &Raster, row0: usize, col0: usize, size: usize) -> QuadNode {
            let spec = raster.spec();
            if row0 >= spec.nrows || col0 >= spec.ncols {
                return QuadNode::Leaf(raster.nodata());
            }
            if size == 1 {
                return QuadNode::Leaf(raster.get(CellIndex {
                    row: row0,
                    col: col0,
                }));
            }
            let h = size / 2;
            merged([
                build(raster, row0, col0, h),
                build(raster, row0, col0 + h, h),
                build(raster, row0 + h, col0, h),
                build(raster, row0 + h, col0 + h, h),
            ])
        }
        let spec = raster.spec().clone();
        let side = side_for(spec.ncols, spec.nrows);
        let root = build(raster, 0, 0, side);
        Quadtree::assemble(spec, raster.nodata(), side, root)
    }

    fn assemble(spec: GridSpec, nodata: i32, side: usize, root: QuadNode) -> Quadtree {
        let flat = flatten(&root);
        Quadtree {
            spec,
            nodata,
            side,
            root,
            flat,
        }
    }

    pub(crate) fn from_parts(spec: GridSpec, nodata: i32, side: usize, root: QuadNode) -> Quadtree {
        assert_eq!(
            side,
            side_for(spec.ncols, spec.nrows),
            "side does not fit the grid"
        );
        Quadtree::assemble(spec, nodata, side, root)
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn nodata(&self) -> i32 {
        self.nodata
    }

    /// Side length in cells of the padded square the root covers.
    pub fn side(&self) -> usize {
        self.side
    }

    pub fn root(&self) -> &QuadNode {
        &self.root
    }

    /// Value of the cell containing `p`; `None` outside the extent or where
    /// the cell holds nodata.
    pub fn value_at(&self, p: Point) -> Option<i32> {
        self.value_at_with_visits(p).0
    }

    /// Same as [`value_at`](Self::value_at), also reporting how many nodes
    /// the descent visited (zero for points outside the extent).
    pub fn value_at_with_visits(&self, p: Point) -> (Option<i32>, usize) {
        let Some(target) = self.spec.cell_of(p) else {
            return (None, 0);
        };
        // The padded square has power-of-two side, so the quadrant at each
        // level is a bit of the row and column indices, high bit first.
        let mut mask = self.side >> 1;
        let mut idx = 0usize;
        let mut visits = 1usize;
        loop {
            let n = self.flat[idx];
            if n.child == FLAT_LEAF {
                let out = if n.value == self.nodata {
                    None
                } else {
                    Some(n.value)
                };
                return (out, visits);
            }
            let quad =
                (usize::from(target.row & mask != 0) << 1) | usize::from(target.col & mask != 0);
            idx = n.child as usize + quad;
            mask >>= 1;
            visits += 1;
        }
    }

    /// Expands the tree back into the dense raster it was built from.
    pub fn to_raster(&self) -> Raster {
        fn fill(
            node: &QuadNode,
            row0: usize,
            col0: usize,
            size: usize,
            nrows: usize,
            ncols: usize,
            nodata: i32,
            values: &mut [i32],
        ) {
            match node {
                QuadNode::Leaf(v) => {
                    if *v == nodata {
                        return; // buffer is pre-filled with nodata
                    }
                    let rmax = (row0 + size).min(nrows);
                    let cmax = (col0 + size).min(ncols);
                    for r in row0..rmax {
                        values[r * ncols + col0..r * ncols + cmax].fill(*v);
                    }
                }
                QuadNode::Internal(kids) => {
                    let h = size / 2;
                    fill(&kids[0], row0, col0, h, nrows, ncols, nodata, values);
                    fill(&kids[1], row0, col0 + h, h, nrows, ncols, nodata, values);
                    fill(&kids[2], row0 + h, col0, h, nrows, ncols, nodata, values);
                    fill(
                        &kids[3],
                        row0 + h,
                        col0 + h,
                        h,
                        nrows,
                        ncols,
                        nodata,
                        values,
                    );
                }
            }
        }
        let mut values = vec![self.nodata; self.spec.cell_count()];
        fill(
            &self.root,
            0,
            0,
            self.side,
            self.spec.nrows,
            self.spec.ncols,
            self.nodata,
            &mut values,
        );
        Raster::new(self.spec.clone(), values, self.nodata)
    }

    pub fn node_count(&self) -> usize {
        fn count(n: &QuadNode) -> usize {
            match n {
                QuadNode::Leaf(_) => 1,
                QuadNode::Internal(kids) => 1 + kids.iter().map(count).sum::<usize>(),
            }
        }
        count(&self.root)
    }

    pub fn leaf_count(&self) -> usize {
        fn count(n: &QuadNode) -> usize {
            match n {
                QuadNode::Leaf(_) => 1,
                QuadNode::Internal(kids) => kids.iter().map(count).sum(),
            }
        }
        count(&self.root)
    }

    /// Longest root-to-leaf edge count; a lone leaf root has depth 0.
    pub fn depth(&self) -> usize {
        fn depth(n: &QuadNode) -> usize {
            match n {
                QuadNode::Leaf(_) => 0,
                QuadNode::Internal(kids) => 1 + kids.iter().map(depth).max().unwrap(),
            }
        }
        depth(&self.root)
    }

    /// Leaves per raster cell: 1.0 means no compression, small values mean
    /// large uniform regions.
    pub fn compression_ratio(&self) -> f64 {
        self.leaf_count() as f64 / self.spec.cell_count() as f64
    }
}

/// Combines two trees on the same grid leaf-by-leaf.
///
/// Where either side holds its nodata value the result is `a`'s nodata;
/// elsewhere the combiner decides. The output is canonical and structurally
/// equal to `Quadtree::from_raster` of the cellwise-combined rasters.
pub fn intersect(
    a: &Quadtree,
    b: &Quadtree,
    mut f: impl FnMut(i32, i32) -> i32,
) -> Result<Quadtree> {
    if !a.spec.aligned_with(&b.spec) {
        return Err(Error::Misaligned(format!(
            "{}x{} at ({}, {}) res {} vs {}x{} at ({}, {}) res {}",
            a.spec.ncols,
            a.spec.nrows,
            a.spec.xmin,
            a.spec.ymax,
            a.spec.resolution,
            b.spec.ncols,
            b.spec.nrows,
            b.spec.xmin,
            b.spec.ymax,
            b.spec.resolution,
        )));
    }
    fn combine<F: FnMut(i32, i32) -> i32>(a: &QuadNode, b: &QuadNode, f: &mut F) -> QuadNode {
        if let (QuadNode::Leaf(x), QuadNode::Leaf(y)) = (a, b) {
            return QuadNode::Leaf(f(*x, *y));
        }
        merged([
            combine(child(a, 0), child(b, 0), f),
            combine(child(a, 1), child(b, 1), f),
            combine(child(a, 2), child(b, 2), f),
            combine(child(a, 3), child(b, 3), f),
        ])
    }
    let mut rule = |x: i32, y: i32| {
        if x == a.nodata || y == b.nodata {
            a.nodata
        } else {
            f(x, y)
        }
    };
    let root = combine(&a.root, &b.root, &mut rule);
    Ok(Quadtree::assemble(a.spec.clone(), a.nodata, a.side, root))
}

/// Presence intersection: 1 where both sides are nonzero, else 0.
pub fn intersect_and(a: &Quadtree, b: &Quadtree) -> Result<Quadtree> {
    intersect(a, b, |x, y| i32::from(x != 0 && y != 0))
}

/// Keeps `a`'s values where `b` is nonzero, zeroes them elsewhere.
pub fn intersect_mask(a: &Quadtree, b: &Quadtree) -> Result<Quadtree> {
    intersect(a, b, |x, y| if y != 0 { x } else { 0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::DEFAULT_NODATA;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn raster_from_rows(rows: &[&[i32]]) -> Raster {
        let nrows = rows.len();
        let ncols = rows[0].len();
        let spec = GridSpec::new(0.0, nrows as f64, 1.0, ncols, nrows, "t");
        let values = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Raster::new(spec, values, DEFAULT_NODATA)
    }

    fn random_raster(rng: &mut ChaCha8Rng, ncols: usize, nrows: usize) -> Raster {
        let spec = GridSpec::new(0.0, nrows as f64, 1.0, ncols, nrows, "t");
        let alphabet = [DEFAULT_NODATA, 0, 1, 2];
        let values = (0..ncols * nrows)
            .map(|_| alphabet[rng.gen_range(0..alphabet.len())])
            .collect();
        Raster::new(spec, values, DEFAULT_NODATA)
    }

    /// Independent construction: a region becomes a leaf exactly when a
    /// full scan finds it uniform, treating padding as nodata.
    fn oracle_root(raster: &Raster) -> QuadNode {
        fn region_value(raster: &Raster, row0: usize, col0: usize, size: usize) -> Option<i32> {
            let spec = raster.spec();
            let mut first: Option<i32> = None;
            for r in row0..row0 + size {
                for c in col0..col0 + size {
                    let v = if r < spec.nrows && c < spec.ncols {
                        raster.get(CellIndex { row: r, col: c })
                    } else {
                        raster.nodata()
                    };
                    match first {
                        None => first = Some(v),
                        Some(f) if f != v => return None,
                        _ => {}
                    }
                }
            }
            first
        }
        fn rec(raster: &Raster, row0: usize, col0: usize, size: usize) -> QuadNode {
            if let Some(v) = region_value(raster, row0, col0, size) {
                return QuadNode::Leaf(v);
            }
            let h = size / 2;
            QuadNode::Internal(Box::new([
                rec(raster, row0, col0, h),
                rec(raster, row0, col0 + h, h),
                rec(raster, row0 + h, col0, h),
                rec(raster, row0 + h, col0 + h, h),
            ]))
        }
        let side = side_for(raster.spec().ncols, raster.spec().nrows);
        rec(raster, 0, 0, side)
    }

    fn assert_canonical(n: &QuadNode) {
        if let QuadNode::Internal(kids) = n {
            if let [QuadNode::Leaf(a), QuadNode::Leaf(b), QuadNode::Leaf(c), QuadNode::Leaf(d)] =
                &**kids
            {
                assert!(
                    !(a == b && b == c && c == d),
                    "internal node with four equal leaves"
                );
            }
            for k in kids.iter() {
                assert_canonical(k);
            }
        }
    }

    #[test]
    fn uniform_raster_is_one_leaf() {
        let t = Quadtree::from_raster(&raster_from_rows(&[&[3, 3], &[3, 3]]));
        assert_eq!(t.node_count(), 1);
        assert_eq!(t.leaf_count(), 1);
        assert_eq!(t.depth(), 0);
        assert_eq!(t.root(), &QuadNode::Leaf(3));
    }

    #[test]
    fn single_odd_cell_splits_once() {
        let t = Quadtree::from_raster(&raster_from_rows(&[&[1, 1], &[1, 2]]));
        assert_eq!(t.node_count(), 5);
        assert_eq!(t.leaf_count(), 4);
        assert_eq!(t.depth(), 1);
    }

    #[test]
    fn checkerboard_splits_fully() {
        let rows: Vec<Vec<i32>> = (0..4)
            .map(|r| (0..4).map(|c| ((r + c) % 2) as i32).collect())
            .collect();
        let refs: Vec<&[i32]> = rows.iter().map(|r| r.as_slice()).collect();
        let t = Quadtree::from_raster(&raster_from_rows(&refs));
        assert_eq!(t.leaf_count(), 16);
        assert_eq!(t.node_count(), 21);
        assert_eq!(t.depth(), 2);
        assert_eq!(t.compression_ratio(), 1.0);
    }

    #[test]
    fn padded_build_matches_scan_oracle() {
        // 3x3 grid pads to side 4; padding must merge into nodata leaves.
        let r = raster_from_rows(&[&[5, 5, 5], &[5, 5, 5], &[5, 5, 5]]);
        let t = Quadtree::from_raster(&r);
        assert_eq!(t.side(), 4);
        assert_eq!(t.root(), &oracle_root(&r));
        for row in 0..3 {
            for col in 0..3 {
                let c = CellIndex { row, col };
                assert_eq!(t.value_at(r.spec().cell_center(c)), Some(5));
            }
        }
    }

    #[test]
    fn random_builds_match_scan_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for _ in 0..60 {
            let ncols = rng.gen_range(1..20usize);
            let nrows = rng.gen_range(1..20usize);
            let r = random_raster(&mut rng, ncols, nrows);
            let t = Quadtree::from_raster(&r);
            assert_eq!(t.root(), &oracle_root(&r), "{ncols}x{nrows}");
            assert_canonical(t.root());
        }
    }

    #[test]
    fn round_trips_through_raster() {
        let mut rng = ChaCha8Rng::seed_from_u64(62);
        for _ in 0..40 {
            let ncols = rng.gen_range(1..40usize);
            let nrows = rng.gen_range(1..40usize);
            let r = random_raster(&mut rng, ncols, nrows);
            let back = Quadtree::from_raster(&r).to_raster();
            assert_eq!(back, r);
        }
    }

    #[test]
    fn queries_match_raster_everywhere() {
        let mut rng = ChaCha8Rng::seed_from_u64(63);
        let r = random_raster(&mut rng, 41, 27);
        let t = Quadtree::from_raster(&r);
        let spec = r.spec();
        for row in 0..spec.nrows {
            for col in 0..spec.ncols {
                let p = spec.cell_center(CellIndex { row, col });
                assert_eq!(t.value_at(p), r.value_at(p), "({row}, {col})");
            }
        }
        assert_eq!(t.value_at(Point::new(-5.0, 5.0)), None);
    }

    #[test]
    fn descent_is_logarithmic() {
        let mut rng = ChaCha8Rng::seed_from_u64(64);
        let r = random_raster(&mut rng, 64, 48);
        let t = Quadtree::from_raster(&r);
        assert_eq!(t.side(), 64);
        let budget = 64usize.ilog2() as usize + 1;
        let spec = r.spec().clone();
        for _ in 0..2000 {
            let p = Point::new(rng.gen_range(0.0..64.0), rng.gen_range(0.0..48.0));
            let (_, visits) = t.value_at_with_visits(p);
            if spec.cell_of(p).is_some() {
                assert!(
                    visits >= 1 && visits <= budget,
                    "visits {visits} > {budget}"
                );
            } else {
                assert_eq!(visits, 0);
            }
        }
    }

    #[test]
    fn intersect_matches_raster_combine() {
        let mut rng = ChaCha8Rng::seed_from_u64(65);
        for _ in 0..40 {
            let ncols = rng.gen_range(1..30usize);
            let nrows = rng.gen_range(1..30usize);
            let ra = random_raster(&mut rng, ncols, nrows);
            let rb = random_raster(&mut rng, ncols, nrows);
            let ta = Quadtree::from_raster(&ra);
            let tb = Quadtree::from_raster(&rb);

            let and_f = |x: i32, y: i32| i32::from(x != 0 && y != 0);
            let tree = intersect_and(&ta, &tb).unwrap();
            let raster_route = ra.combine(&rb, and_f).unwrap();
            assert_eq!(tree.to_raster(), raster_route);
            // Same structure as building from the combined raster, not just
            // the same cells.
            assert_eq!(tree, Quadtree::from_raster(&raster_route));
            assert_canonical(tree.root());

            let mask = intersect_mask(&ta, &tb).unwrap();
            let mask_route = ra.combine(&rb, |x, y| if y != 0 { x } else { 0 }).unwrap();
            assert_eq!(mask, Quadtree::from_raster(&mask_route));
        }
    }

    #[test]
    fn intersect_with_uniform_ones_is_presence_mask() {
        let mut rng = ChaCha8Rng::seed_from_u64(66);
        let r = random_raster(&mut rng, 17, 23);
        let t = Quadtree::from_raster(&r);
        let ones = Quadtree::from_raster(&Raster::filled(r.spec().clone(), 1, DEFAULT_NODATA));
        let masked = intersect_and(&t, &ones).unwrap().to_raster();
        for (got, orig) in masked.values().iter().zip(r.values()) {
            let want = match *orig {
                DEFAULT_NODATA => DEFAULT_NODATA,
                0 => 0,
                _ => 1,
            };
            assert_eq!(*got, want);
        }
    }

    #[test]
    fn misaligned_intersection_is_rejected() {
        let a = Quadtree::from_raster(&raster_from_rows(&[&[1, 1], &[1, 1]]));
        let spec = GridSpec::new(0.5, 2.0, 1.0, 2, 2, "t");
        let b = Quadtree::from_raster(&Raster::zeroed(spec));
        assert!(matches!(intersect_and(&a, &b), Err(Error::Misaligned(_))));
    }

    #[test]
    fn compression_reflects_uniformity() {
        let spec = GridSpec::new(0.0, 64.0, 1.0, 64, 64, "t");
        let uniform = Quadtree::from_raster(&Raster::filled(spec.clone(), 1, DEFAULT_NODATA));
        assert_eq!(uniform.leaf_count(), 1);
        assert_eq!(uniform.compression_ratio(), 1.0 / 4096.0);

        let rows: Vec<Vec<i32>> = (0..256)
            .map(|r| (0..256).map(|c| ((r + c) % 2) as i32).collect())
            .collect();
        let refs: Vec<&[i32]> = rows.iter().map(|r| r.as_slice()).collect();
        let board = Quadtree::from_raster(&raster_from_rows(&refs));
        assert_eq!(board.leaf_count(), 65536);
        assert_eq!(board.compression_ratio(), 1.0);
    }
}
