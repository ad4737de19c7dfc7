//! On-disk formats: trajectory directories, CSV emitters, JSON reports.
//!
//! A trajectory is stored as a directory of field snapshots named by a
//! zero-padded step index next to a `manifest.json` holding {times, tau,
//! grid}. The CSV emitters cover free-boundary points (`x1,x2[,x3]`),
//! growth diagnostics (`r,ratio`) and monotonicity curves (`r,M`). All
//! floats are written with 17 significant digits so `f64` data round-trips
//! exactly.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::Error;
use crate::freeboundary::GrowthDiagnostics;
use crate::grid::{read_snapshot, write_snapshot, Grid};
use crate::monotonicity::MonneauCurve;
use crate::parabolic::Trajectory;
use crate::scalar::Real;

fn snapshot_name(step: usize) -> String {
    format!("{:06}.snap", step)
}

fn grid_json<T: Real>(g: &Grid<T>) -> serde_json::Value {
    let dim = g.dim();
    serde_json::json!({
        "dim": dim,
        "h": g.h().as_f64(),
        "extent": g.extent()[..dim].to_vec(),
        "origin": g.origin()[..dim].iter().map(|v| v.as_f64()).collect::<Vec<f64>>(),
    })
}

/// Serializes a JSON value to `path`, pretty-printed with a trailing newline.
pub fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), std::io::Error> {
    let mut out = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()
}

/// Writes free-boundary points as CSV rows `x1,x2[,x3]`, one per point.
pub fn write_fb_csv<T: Real>(
    path: &Path,
    points: &[[T; 3]],
    dim: usize,
) -> Result<(), std::io::Error> {
    let mut out = BufWriter::new(File::create(path)?);
    for p in points {
        for k in 0..dim {
            if k > 0 {
                write!(out, ",")?;
            }
            write!(out, "{:.16e}", p[k])?;
        }
        writeln!(out)?;
    }
    out.flush()
}

/// Writes growth diagnostics as CSV rows `r,ratio` in increasing r.
pub fn write_growth_csv<T: Real>(
    path: &Path,
    diag: &GrowthDiagnostics<T>,
) -> Result<(), std::io::Error> {
    let mut out = BufWriter::new(File::create(path)?);
    for &(r, ratio) in &diag.ratios {
        writeln!(out, "{:.16e},{:.16e}", r, ratio)?;
    }
    out.flush()
}

/// Writes a monotonicity curve as CSV rows `r,M`; the JSON header that
/// belongs next to it comes from [`MonneauCurve::header_json`].
pub fn write_monneau_csv<T: Real>(
    path: &Path,
    curve: &MonneauCurve<T>,
) -> Result<(), std::io::Error> {
    let mut out = BufWriter::new(File::create(path)?);
    for (r, m) in curve.radii.iter().zip(&curve.values) {
        writeln!(out, "{:.16e},{:.16e}", r, m)?;
    }
    out.flush()
}

/// Writes every time level of `traj` into `dir` (created if missing) as
/// snapshots `000000.snap`, `000001.snap`, ... plus a `manifest.json`.
pub fn save_trajectory<T: Real>(
    dir: &Path,
    traj: &Trajectory<T>,
    tau: T,
) -> Result<(), Error<T>> {
    std::fs::create_dir_all(dir)?;
    for (k, field) in traj.fields().iter().enumerate() {
        write_snapshot(&dir.join(snapshot_name(k)), field)?;
    }
    let manifest = serde_json::json!({
        "times": traj.times().iter().map(|t| t.as_f64()).collect::<Vec<f64>>(),
        "tau": tau.as_f64(),
        "grid": grid_json(traj.grid()),
    });
    write_json(&dir.join("manifest.json"), &manifest)?;
    Ok(())
}

/// Loads a trajectory directory written by [`save_trajectory`]; returns the
/// trajectory and the stored time step.
pub fn load_trajectory<T: Real>(dir: &Path) -> Result<(Trajectory<T>, T), Error<T>> {
    let text = std::fs::read_to_string(dir.join("manifest.json"))?;
    let manifest: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::Format(format!("manifest: {}", e)))?;
    let times: Vec<T> = manifest["times"]
        .as_array()
        .ok_or_else(|| Error::Format("manifest lacks a times array".into()))?
        .iter()
        .map(|v| {
            v.as_f64()
                .map(T::of)
                .ok_or_else(|| Error::Format(format!("bad time entry {}", v)))
        })
        .collect::<Result<_, _>>()?;
    let tau = manifest["tau"]
        .as_f64()
        .map(T::of)
        .ok_or_else(|| Error::Format("manifest lacks tau".into()))?;
    let mut fields = Vec::with_capacity(times.len());
    for k in 0..times.len() {
        let path: PathBuf = dir.join(snapshot_name(k));
        if !path.exists() {
            return Err(Error::Format(format!(
                "manifest lists {} times but snapshot {} is missing",
                times.len(),
                path.display()
            )));
        }
        fields.push(read_snapshot(&path)?);
    }
    let traj = Trajectory::new(times, fields)?;
    Ok((traj, tau))
}
