//! ESRI ASCII grid files.
//!
//! The six header lines appear in fixed order (ncols, nrows, xllcorner,
//! yllcorner, cellsize, NODATA_value); keys are matched case-insensitively
//! on read and written in conventional casing. The format carries no CRS,
//! so a read raster comes back with an empty CRS label.

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::{GridSpec, Raster};

fn parse_err(path: &Path, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        message: message.into(),
    }
}

pub fn write_ascii_grid(raster: &Raster, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let spec = raster.spec();
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "ncols {}", spec.ncols)?;
    writeln!(out, "nrows {}", spec.nrows)?;
    writeln!(out, "xllcorner {}", spec.xmin)?;
    writeln!(out, "yllcorner {}", spec.ymin())?;
    writeln!(out, "cellsize {}", spec.resolution)?;
    writeln!(out, "NODATA_value {}", raster.nodata())?;
    for row in raster.values().chunks(spec.ncols) {
        let mut line = String::with_capacity(row.len() * 3);
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                line.push(' ');
            }
            line.push_str(&v.to_string());
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

pub fn read_ascii_grid(path: impl AsRef<Path>) -> Result<Raster> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let mut tokens = text.split_whitespace();

    let mut header_field = |key: &str| -> Result<String> {
        let found = tokens
            .next()
            .ok_or_else(|| parse_err(path, format!("missing header line {key}")))?;
        if !found.eq_ignore_ascii_case(key) {
            return Err(parse_err(
                path,
                format!("expected header key {key}, found {found}"),
            ));
        }
        let value = tokens
            .next()
            .ok_or_else(|| parse_err(path, format!("header key {key} has no value")))?;
        Ok(value.to_string())
    };

    let ncols_tok = header_field("ncols")?;
    let nrows_tok = header_field("nrows")?;
    let xll_tok = header_field("xllcorner")?;
    let yll_tok = header_field("yllcorner")?;
    let cell_tok = header_field("cellsize")?;
    let nodata_tok = header_field("NODATA_value")?;

    let ncols: usize = ncols_tok.parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        parse_err(
            path,
            format!("ncols must be a positive integer, got {ncols_tok}"),
        )
    })?;
    let nrows: usize = nrows_tok.parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        parse_err(
            path,
            format!("nrows must be a positive integer, got {nrows_tok}"),
        )
    })?;
    let xllcorner: f64 = xll_tok
        .parse()
        .ok()
        .filter(|v: &f64| v.is_finite())
        .ok_or_else(|| parse_err(path, format!("xllcorner is not a number: {xll_tok}")))?;
    let yllcorner: f64 = yll_tok
        .parse()
        .ok()
        .filter(|v: &f64| v.is_finite())
        .ok_or_else(|| parse_err(path, format!("yllcorner is not a number: {yll_tok}")))?;
    let cellsize: f64 = cell_tok
        .parse()
        .ok()
        .filter(|&v: &f64| v.is_finite() && v > 0.0)
        .ok_or_else(|| parse_err(path, format!("cellsize must be positive, got {cell_tok}")))?;
    let nodata: i32 = nodata_tok.parse().map_err(|_| {
        parse_err(
            path,
            format!("NODATA_value is not an integer: {nodata_tok}"),
        )
    })?;

    let mut values = Vec::with_capacity(ncols * nrows);
    for tok in tokens {
        let v: i32 = tok
            .parse()
            .map_err(|_| parse_err(path, format!("cell value is not an integer: {tok}")))?;
        values.push(v);
    }
    if values.len() != ncols * nrows {
        return Err(parse_err(
            path,
            format!(
                "expected {} cell values, found {}",
                ncols * nrows,
                values.len()
            ),
        ));
    }

    let ymax = yllcorner + nrows as f64 * cellsize;
    let spec = GridSpec::new(xllcorner, ymax, cellsize, ncols, nrows, "");
    Ok(Raster::new(spec, values, nodata))
}
