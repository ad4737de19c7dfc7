//! The spherical L2 deviation functional and its monotonicity check.
//!
//! For a candidate profile p(x) = 0.5 x'Ax, the quantity
//!
//!   M(r) = r^-(n+3) * integral over the sphere of radius r of (u - p)^2
//!
//! is nondecreasing in r when the center is a singular free-boundary point,
//! and its limit as r -> 0 vanishes exactly when p is the blow-up profile.
//! Numerically M is evaluated by sphere quadrature in two algebraically
//! equivalent forms (the weighted sum above, and the same integral after
//! rescaling to the unit sphere), which are cross-checked against each
//! other; monotonicity is then tested across the given radii with a slack
//! calibrated to the interpolation error.

use crate::blowup::in_profile_set;
use crate::error::Error;
use crate::grid::quadrature::sphere_quadrature;
use crate::grid::{point_f64, ScalarField};
use crate::linalg::SymMat;
use crate::scalar::Real;

/// Evaluations of the deviation functional along a ladder of radii.
#[derive(Debug, Clone)]
pub struct MonneauCurve<T> {
    pub center: [T; 3],
    /// Matrix of the comparison profile, in the unit-trace PSD set.
    pub matrix: SymMat<T>,
    /// Increasing, only the radii that were actually evaluated.
    pub radii: Vec<T>,
    /// M(r), one value per radius; always nonnegative.
    pub values: Vec<T>,
    /// The same integrals computed on the rescaled unit sphere; agrees
    /// with `values` to about machine precision, kept as a cross-check.
    pub values_rescaled: Vec<T>,
    /// Radii rejected for leaving the domain or resolving under 4h.
    pub skipped: Vec<T>,
    /// Quadrature sample count per sphere.
    pub m: usize,
}

impl<T: Real> MonneauCurve<T> {
    /// Header for serialized curves; the rows live in the CSV.
    pub fn header_json(&self) -> serde_json::Value {
        let dim = self.matrix.dim();
        let center: Vec<f64> = self.center[..dim].iter().map(|v| v.as_f64()).collect();
        serde_json::json!({
            "center": center,
            "p_matrix": self.matrix.to_json(),
            "m": self.m,
        })
    }

    pub fn worst_form_mismatch(&self) -> T {
        self.values
            .iter()
            .zip(&self.values_rescaled)
            .map(|(&a, &b)| (a - b).abs())
            .fold(T::zero(), T::max)
    }
}

/// Evaluates M(r) around x0 for the profile given by `matrix`, at every
/// admissible radius. Radii whose sphere leaves the domain or falls below
/// the 4h resolution floor are skipped and recorded on the curve.
pub fn monneau<T: Real>(
    field: &ScalarField<T>,
    x0: &[T; 3],
    matrix: &SymMat<T>,
    radii: &[T],
    m: usize,
) -> Result<MonneauCurve<T>, Error<T>> {
    let g = *field.grid();
    if matrix.dim() != g.dim() {
        return Err(Error::ShapeMismatch(format!(
            "profile matrix is {}-dimensional on a {}-dimensional grid",
            matrix.dim(),
            g.dim()
        )));
    }
    if !in_profile_set(matrix, T::of(1e-9)) {
        return Err(Error::ConstraintViolation(
            "profile matrix must be positive semidefinite with unit trace".into(),
        ));
    }
    if !g.contains(x0) {
        return Err(Error::OutOfDomain(point_f64(x0)));
    }

    let n = g.dim();
    let half = T::of(0.5);
    let mut ladder: Vec<T> = radii.to_vec();
    ladder.sort_by(|a, b| a.partial_cmp(b).expect("radii are finite"));
    ladder.dedup();

    let mut kept = Vec::new();
    let mut values = Vec::new();
    let mut values_rescaled = Vec::new();
    let mut skipped = Vec::new();
    for &r in &ladder {
        if !(r > T::zero()) || !r.is_finite() {
            return Err(Error::InvalidParameter(format!("bad radius {}", r)));
        }
        if r < T::of(4.0) * g.h() || !g.ball_inside(x0, r) {
            skipped.push(r);
            continue;
        }
        let rule = sphere_quadrature(&g, x0, r, m)?;
        // direct form: weighted sum over the physical sphere, divided by
        // r^(n+3); rescaled form: pull samples back to the unit sphere
        let mut direct = T::zero();
        let mut rescaled = T::zero();
        let inv_r2 = T::one() / (r * r);
        let w_unit = sphere_measure::<T>(n) / T::of_usize(rule.len());
        for (j, y) in rule.points.iter().enumerate() {
            let u = field.interpolate(y)?;
            let mut d = [T::zero(); 3];
            for k in 0..n {
                d[k] = y[k] - x0[k];
            }
            let p_phys = half * matrix.quad(&d);
            let diff = u - p_phys;
            direct = direct + rule.weights[j] * diff * diff;

            let e = &rule.directions[j];
            let p_unit = half * matrix.quad(e);
            let diff_u = u * inv_r2 - p_unit;
            rescaled = rescaled + w_unit * diff_u * diff_u;
        }
        let mut scale = T::one();
        for _ in 0..(n + 3) {
            scale = scale * r;
        }
        kept.push(r);
        values.push(direct / scale);
        values_rescaled.push(rescaled);
    }

    Ok(MonneauCurve {
        center: *x0,
        matrix: *matrix,
        radii: kept,
        values,
        values_rescaled,
        skipped,
        m,
    })
}

fn sphere_measure<T: Real>(dim: usize) -> T {
    match dim {
        1 => T::of(2.0),
        2 => T::of(2.0) * T::PI(),
        _ => T::of(4.0) * T::PI(),
    }
}

/// Tests whether the curve is nondecreasing up to `slack`: passes iff every
/// consecutive increment is at least -slack. The second return value is the
/// most negative increment, or zero for a curve that never decreases.
pub fn check_monotone<T: Real>(
    curve: &MonneauCurve<T>,
    slack: T,
) -> Result<(bool, T), Error<T>> {
    if curve.radii.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "monotonicity needs at least two evaluated radii, got {}",
            curve.radii.len()
        )));
    }
    let mut worst = T::zero();
    for w in curve.values.windows(2) {
        worst = worst.min(w[1] - w[0]);
    }
    Ok((worst >= -slack, worst))
}
