//! Run configuration: one JSON document that fixes a whole experiment.
//!
//! Every CLI entry point reads the same document shape; fields that a given
//! run does not need (time step for an elliptic solve, say) may be omitted.
//! Unknown keys are rejected so a typo cannot silently fall back to a
//! default. All runs are deterministic; the `seedless` flag exists so a
//! config cannot even ask for randomness.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::blowup::Thresholds;
use crate::error::Error;
use crate::expr::Expr;
use crate::grid::Grid;

fn default_g() -> f64 {
    1.0
}

fn default_omega() -> f64 {
    1.8
}

fn default_tol() -> f64 {
    1e-8
}

fn default_maxit() -> usize {
    100_000
}

fn default_true() -> bool {
    true
}

fn default_rho() -> f64 {
    0.05
}

fn default_drift() -> f64 {
    0.1
}

fn default_eps_ker() -> f64 {
    0.1
}

/// Classification thresholds as they appear in the config document. The
/// contact threshold defaults to h^2 of the owning config when omitted.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdSettings {
    #[serde(default = "default_rho")]
    pub rho_reg: f64,
    #[serde(default = "default_rho")]
    pub rho_sing: f64,
    #[serde(default = "default_drift")]
    pub rho_drift: f64,
    #[serde(default = "default_eps_ker")]
    pub eps_ker: f64,
    #[serde(default)]
    pub delta: Option<f64>,
}

impl Default for ThresholdSettings {
    fn default() -> Self {
        ThresholdSettings {
            rho_reg: default_rho(),
            rho_sing: default_rho(),
            rho_drift: default_drift(),
            eps_ker: default_eps_ker(),
            delta: None,
        }
    }
}

/// One experiment, fully specified.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Spatial dimension, 1 to 3.
    pub dim: usize,
    /// Axis ranges [lo, hi], one per dimension.
    #[serde(rename = "box")]
    pub bounds: Vec<[f64; 2]>,
    /// Grid spacing; every axis length must be a whole multiple of it.
    pub h: f64,
    /// Boundary data g(x, t) over x1..x3 and t.
    pub boundary: String,
    /// Right-hand side constant of the complementarity system.
    #[serde(default = "default_g")]
    pub g: f64,
    /// Time step; required by the parabolic entry points only.
    #[serde(default)]
    pub tau: Option<f64>,
    /// Final time; required by the parabolic entry points only.
    #[serde(rename = "T", default)]
    pub t_final: Option<f64>,
    /// Blow-up radius ladder; empty means the dyadic default.
    #[serde(default)]
    pub radii: Vec<f64>,
    #[serde(default)]
    pub thresholds: ThresholdSettings,
    /// Relaxation parameter of the projected SOR sweep.
    #[serde(default = "default_omega")]
    pub omega: f64,
    /// Solver stopping tolerance on the natural residual.
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// Solver sweep cap.
    #[serde(default = "default_maxit")]
    pub maxit: usize,
    /// Must stay true: no entry point consumes randomness.
    #[serde(default = "default_true")]
    pub seedless: bool,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, Error> {
        let cfg: RunConfig = serde_json::from_str(text)
            .map_err(|e| Error::Format(format!("config: {}", e)))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    fn validate(&self) -> Result<(), Error> {
        if !(1..=3).contains(&self.dim) {
            return Err(Error::BadDimension(self.dim));
        }
        if self.bounds.len() != self.dim {
            return Err(Error::InvalidParameter(format!(
                "box needs {} axis ranges, got {}",
                self.dim,
                self.bounds.len()
            )));
        }
        if !(self.h > 0.0) || !self.h.is_finite() {
            return Err(Error::InvalidParameter(format!("spacing h = {}", self.h)));
        }
        for (k, [lo, hi]) in self.bounds.iter().enumerate() {
            if !(hi > lo) {
                return Err(Error::InvalidParameter(format!(
                    "axis {} range [{}, {}] is empty",
                    k + 1,
                    lo,
                    hi
                )));
            }
            let cells = (hi - lo) / self.h;
            if (cells - cells.round()).abs() > 1e-9 * cells.max(1.0) {
                return Err(Error::InvalidParameter(format!(
                    "axis {} length {} is not a multiple of h = {}",
                    k + 1,
                    hi - lo,
                    self.h
                )));
            }
        }
        if !(self.omega > 0.0 && self.omega < 2.0) {
            return Err(Error::InvalidParameter(format!(
                "omega = {} outside (0, 2)",
                self.omega
            )));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter(format!("tol = {}", self.tol)));
        }
        if self.maxit == 0 {
            return Err(Error::InvalidParameter("maxit = 0".into()));
        }
        for &v in [&self.tau, &self.t_final].into_iter().flatten() {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "time parameters must be positive, got {}",
                    v
                )));
            }
        }
        for &r in &self.radii {
            if !(r > 0.0) || !r.is_finite() {
                return Err(Error::InvalidParameter(format!("radius {}", r)));
            }
        }
        if let Some(d) = self.thresholds.delta {
            if !(d > 0.0) {
                return Err(Error::InvalidParameter(format!("delta = {}", d)));
            }
        }
        if !self.seedless {
            return Err(Error::InvalidParameter(
                "seedless must stay true: no entry point consumes randomness".into(),
            ));
        }
        Expr::parse(&self.boundary)?;
        Ok(())
    }

    pub fn grid(&self) -> Result<Grid<f64>, Error> {
        let mut extent = [1usize; 3];
        let mut origin = [0.0f64; 3];
        for (k, [lo, hi]) in self.bounds.iter().enumerate() {
            extent[k] = ((hi - lo) / self.h).round() as usize + 1;
            origin[k] = *lo;
        }
        Grid::new(self.dim, extent, self.h, origin)
    }

    pub fn boundary_expr(&self) -> Result<Expr, Error> {
        Ok(Expr::parse(&self.boundary)?)
    }

    pub fn thresholds(&self) -> Thresholds<f64> {
        let mut t = Thresholds::with_spacing(self.h);
        t.rho_reg = self.thresholds.rho_reg;
        t.rho_sing = self.thresholds.rho_sing;
        t.rho_drift = self.thresholds.rho_drift;
        t.eps_ker = self.thresholds.eps_ker;
        if let Some(d) = self.thresholds.delta {
            t.delta = d;
        }
        t
    }

    /// The configured ladder, or dyadic radii 0.5, 0.25, ... down to the
    /// smallest admissible blow-up radius 4h (at least two entries).
    pub fn radii(&self) -> Vec<f64> {
        if !self.radii.is_empty() {
            return self.radii.clone();
        }
        let mut out = Vec::new();
        let mut r = 0.5;
        while r >= 4.0 * self.h || out.len() < 2 {
            out.push(r);
            r /= 2.0;
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serializes")
    }
}
