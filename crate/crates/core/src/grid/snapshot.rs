//! Plain-text snapshots of scalar fields.
//!
//! Line 1 is the header: dimension, spacing, node counts per axis, then the
//! origin coordinates, all whitespace-separated. Every following line holds
//! one node value in row-major order (last axis fastest). Values are written
//! with 17 significant digits so `f64` fields round-trip exactly.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::{Grid, ScalarField};
use crate::error::Error;
use crate::scalar::Real;

pub fn write_snapshot<T: Real>(path: &Path, field: &ScalarField<T>) -> Result<(), Error<T>> {
    let g = field.grid();
    let file = File::create(path)?;
    let mut out = BufWriter::new(file);
    write!(out, "{} {:.16e}", g.dim(), g.h())?;
    for k in 0..g.dim() {
        write!(out, " {}", g.extent()[k])?;
    }
    for k in 0..g.dim() {
        write!(out, " {:.16e}", g.origin()[k])?;
    }
    writeln!(out)?;
    for v in field.values() {
        writeln!(out, "{:.16e}", v)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_snapshot<T: Real>(path: &Path) -> Result<ScalarField<T>, Error<T>> {
    let file = File::open(path)?;
    let mut lines = BufReader::new(file).lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Format("snapshot file is empty".into()))??;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() < 2 {
        return Err(Error::Format("snapshot header is truncated".into()));
    }
    let dim: usize = tokens[0]
        .parse()
        .map_err(|_| Error::Format(format!("bad dimension token {:?}", tokens[0])))?;
    if dim == 0 || dim > 3 {
        return Err(Error::BadDimension(dim));
    }
    if tokens.len() != 2 + 2 * dim {
        return Err(Error::Format(format!(
            "snapshot header needs {} tokens for dimension {}, got {}",
            2 + 2 * dim,
            dim,
            tokens.len()
        )));
    }
    let parse = |s: &str| -> Result<T, Error<T>> {
        s.parse::<f64>()
            .map(T::of)
            .map_err(|_| Error::Format(format!("bad numeric token {:?}", s)))
    };
    let h = parse(tokens[1])?;
    let mut extent = [1usize; 3];
    for k in 0..dim {
        extent[k] = tokens[2 + k]
            .parse()
            .map_err(|_| Error::Format(format!("bad extent token {:?}", tokens[2 + k])))?;
    }
    let mut origin = [T::zero(); 3];
    for k in 0..dim {
        origin[k] = parse(tokens[2 + dim + k])?;
    }
    let grid = Grid::new(dim, extent, h, origin)?;
    let mut values = Vec::with_capacity(grid.node_count());
    for line in lines {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        values.push(parse(trimmed)?);
    }
    if values.len() != grid.node_count() {
        return Err(Error::Format(format!(
            "snapshot body has {} values, grid needs {}",
            values.len(),
            grid.node_count()
        )));
    }
    ScalarField::from_values(grid, values)
}
