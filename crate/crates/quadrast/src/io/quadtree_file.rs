//! Plain-text quadtree files.
//!
//! The first line is a header
//!
//! ```text
//! QT1 <xmin> <ymax> <resolution> <ncols> <nrows> <side>
//! ```
//!
//! followed by one node per line in preorder (NW, NE, SW, SE): `I` opens an
//! internal node, `L <value>` is a leaf, and `L *` is a nodata leaf. The
//! format does not carry a nodata code or CRS; readers restore nodata as
//! the crate default marker and an empty CRS label. Floats are written in
//! shortest round-trip form, so writing a tree read from a well-formed file
//! reproduces it byte for byte.

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::{GridSpec, DEFAULT_NODATA};
use crate::quadtree::{QuadNode, Quadtree};

fn parse_err(path: &Path, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        message: message.into(),
    }
}

pub fn write_quadtree(tree: &Quadtree, path: impl AsRef<Path>) -> Result<()> {
    fn write_node(node: &QuadNode, nodata: i32, out: &mut impl Write) -> std::io::Result<()> {
        match node {
            QuadNode::Leaf(v) if *v == nodata => writeln!(out, "L *"),
            QuadNode::Leaf(v) => writeln!(out, "L {v}"),
            QuadNode::Internal(kids) => {
                writeln!(out, "I")?;
                for k in kids.iter() {
                    write_node(k, nodata, out)?;
                }
                Ok(())
            }
        }
    }
    let path = path.as_ref();
    let spec = tree.spec();
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(
        out,
        "QT1 {} {} {} {} {} {}",
        spec.xmin,
        spec.ymax,
        spec.resolution,
        spec.ncols,
        spec.nrows,
        tree.side()
    )?;
    write_node(tree.root(), tree.nodata(), &mut out)?;
    Ok(())
}

pub fn read_quadtree(path: impl AsRef<Path>) -> Result<Quadtree> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();

    let header = lines.next().ok_or_else(|| parse_err(path, "empty file"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.first() != Some(&"QT1") {
        return Err(parse_err(path, "not a QT1 file (bad magic)"));
    }
    if fields.len() != 7 {
        return Err(parse_err(
            path,
            format!(
                "header needs 6 fields after the magic, found {}",
                fields.len() - 1
            ),
        ));
    }
    let xmin: f64 = fields[1]
        .parse()
        .ok()
        .filter(|v: &f64| v.is_finite())
        .ok_or_else(|| parse_err(path, format!("bad xmin: {}", fields[1])))?;
    let ymax: f64 = fields[2]
        .parse()
        .ok()
        .filter(|v: &f64| v.is_finite())
        .ok_or_else(|| parse_err(path, format!("bad ymax: {}", fields[2])))?;
    let resolution: f64 = fields[3]
        .parse()
        .ok()
        .filter(|&v: &f64| v.is_finite() && v > 0.0)
        .ok_or_else(|| parse_err(path, format!("bad resolution: {}", fields[3])))?;
    let ncols: usize = fields[4]
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| parse_err(path, format!("bad ncols: {}", fields[4])))?;
    let nrows: usize = fields[5]
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| parse_err(path, format!("bad nrows: {}", fields[5])))?;
    let side: usize = fields[6]
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| parse_err(path, format!("bad side: {}", fields[6])))?;
    let dim = ncols.max(nrows);
    if !side.is_power_of_two() || side < dim || (side > 1 && side / 2 >= dim) {
        return Err(parse_err(
            path,
            format!("side {side} does not fit a {ncols}x{nrows} grid"),
        ));
    }
    let max_depth = side.ilog2() as usize;

    // The body is parsed iteratively: `I` opens a frame, completed nodes
    // bubble up until some frame still needs children. Sibling groups are
    // re-merged so even handcrafted files yield canonical trees.
    let mut stack: Vec<Vec<QuadNode>> = Vec::new();
    let mut root: Option<QuadNode> = None;
    for (lineno, raw) in lines.enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if root.is_some() {
            return Err(parse_err(
                path,
                format!("line {}: content after the tree is complete", lineno + 2),
            ));
        }
        let mut node = if line == "I" {
            if stack.len() >= max_depth {
                return Err(parse_err(
                    path,
                    format!(
                        "line {}: tree deeper than a side-{side} grid allows",
                        lineno + 2
                    ),
                ));
            }
            stack.push(Vec::with_capacity(4));
            continue;
        } else if let Some(rest) = line.strip_prefix("L ") {
            if rest == "*" {
                QuadNode::Leaf(DEFAULT_NODATA)
            } else {
                let v: i32 = rest.parse().map_err(|_| {
                    parse_err(
                        path,
                        format!("line {}: bad leaf value {rest:?}", lineno + 2),
                    )
                })?;
                QuadNode::Leaf(v)
            }
        } else {
            return Err(parse_err(
                path,
                format!("line {}: unrecognized node line {line:?}", lineno + 2),
            ));
        };
        loop {
            match stack.last_mut() {
                None => {
                    root = Some(node);
                    break;
                }
                Some(frame) => {
                    frame.push(node);
                    if frame.len() < 4 {
                        break;
                    }
                    let kids = stack.pop().unwrap();
                    let kids: [QuadNode; 4] = kids.try_into().unwrap();
                    node = merge_siblings(kids);
                }
            }
        }
    }
    if !stack.is_empty() {
        return Err(parse_err(
            path,
            "unexpected end of stream inside internal node",
        ));
    }
    let root = root.ok_or_else(|| parse_err(path, "file has a header but no nodes"))?;
    let spec = GridSpec::new(xmin, ymax, resolution, ncols, nrows, "");
    Ok(Quadtree::from_parts(spec, DEFAULT_NODATA, side, root))
}

fn merge_siblings(kids: [QuadNode; 4]) -> QuadNode {
    if let [QuadNode::Leaf(a), QuadNode::Leaf(b), QuadNode::Leaf(c), QuadNode::Leaf(d)] = &kids {
        if a == b && b == c && c == d {
            return QuadNode::Leaf(*a);
        }
    }
    QuadNode::Internal(Box::new(kids))
}
