//! Rescaled solution samples around candidate free-boundary points, and
//! their classification as regular or singular by comparing least-squares
//! fits against the two admissible profile families.
//!
//! Around a point x0 where the solution vanishes, the parabolic rescaling
//! u(x0 + r x) / r^2 over the unit ball converges (as r shrinks) either to
//! a half-space profile 0.5 ((e.x)_+)^2 or to a quadratic 0.5 x'Ax with A
//! in the unit-trace PSD set. The classifier fits both families at a
//! ladder of radii and issues a verdict from the residuals at the two
//! finest radii plus the drift of the fitted parameters across the ladder.

mod fit;
mod psd;

pub use fit::{fit_regular, fit_singular, RegularFit, SingularFit};
pub use psd::{in_profile_set, project_psd_trace1};

use crate::error::Error;
use crate::grid::quadrature::{default_direction_count, unit_sphere_directions};
use crate::grid::{point_f64, ScalarField};
use crate::linalg::angle_between;
use crate::scalar::Real;

/// Default lattice spacing for the rescaled unit-ball samples.
pub const DEFAULT_SAMPLE_SPACING: f64 = 1.0 / 16.0;

const MAX_SAMPLE_SPACING: f64 = 1.0 / 8.0;

fn ball_measure<T: Real>(dim: usize) -> T {
    match dim {
        1 => T::of(2.0),
        2 => T::PI(),
        _ => T::of(4.0 / 3.0) * T::PI(),
    }
}

fn sphere_measure<T: Real>(dim: usize) -> T {
    match dim {
        1 => T::of(2.0),
        2 => T::of(2.0) * T::PI(),
        _ => T::of(4.0) * T::PI(),
    }
}

/// Values of u(x0 + r x) / r^2 at quadrature points of the closed unit
/// ball: a lattice of spacing `hhat` inside, plus a sphere rule on the
/// boundary. Interior weights are positive and sum to the ball volume.
#[derive(Debug, Clone)]
pub struct BlowupSample<T> {
    pub center: [T; 3],
    pub radius: T,
    dim: usize,
    points: Vec<[T; 3]>,
    values: Vec<T>,
    weights: Vec<T>,
    interior_len: usize,
}

impl<T: Real> BlowupSample<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Sample locations in unit-ball coordinates; the first
    /// `interior_len` lie strictly inside, the rest on the unit sphere.
    pub fn points(&self) -> &[[T; 3]] {
        &self.points
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn interior_len(&self) -> usize {
        self.interior_len
    }

    /// Rescales a solved field around x0 at radius r. The ball must sit
    /// inside the domain, r must resolve at least four grid cells, and the
    /// sample spacing cannot exceed 1/8.
    pub fn rescale(
        field: &ScalarField<T>,
        x0: &[T; 3],
        r: T,
        hhat: T,
    ) -> Result<Self, Error<T>> {
        let g = *field.grid();
        check_spacing(hhat)?;
        if !(r > T::zero()) || !r.is_finite() {
            return Err(Error::InvalidParameter(format!("bad blow-up radius {}", r)));
        }
        if r < T::of(4.0) * g.h() {
            return Err(Error::Resolution(format!(
                "blow-up radius {} resolves fewer than four cells (h = {})",
                r.as_f64(),
                g.h().as_f64()
            )));
        }
        if !g.ball_inside(x0, r) {
            return Err(Error::OutOfDomain(point_f64(x0)));
        }
        Self::build(g.dim(), x0, r, hhat, |p| field.interpolate(p))
    }

    /// Samples an analytic function instead of a solved field, with the
    /// same geometry. Used for exact-profile corpora and invariance tests.
    pub fn from_fn(
        dim: usize,
        f: impl Fn(&[T; 3]) -> T,
        x0: &[T; 3],
        r: T,
        hhat: T,
    ) -> Result<Self, Error<T>> {
        if !(1..=3).contains(&dim) {
            return Err(Error::BadDimension(dim));
        }
        check_spacing(hhat)?;
        if !(r > T::zero()) || !r.is_finite() {
            return Err(Error::InvalidParameter(format!("bad blow-up radius {}", r)));
        }
        Self::build(dim, x0, r, hhat, |p| Ok(f(p)))
    }

    fn build(
        dim: usize,
        x0: &[T; 3],
        r: T,
        hhat: T,
        eval: impl Fn(&[T; 3]) -> Result<T, Error<T>>,
    ) -> Result<Self, Error<T>> {
        let n = (T::one() / hhat).as_f64().floor() as i64;
        let mut points = Vec::new();
        let mut lo = [0i64; 3];
        let mut hi = [0i64; 3];
        for k in 0..dim {
            lo[k] = -n;
            hi[k] = n;
        }
        let mut idx = lo;
        'odometer: loop {
            let mut x = [T::zero(); 3];
            let mut d2 = T::zero();
            for k in 0..dim {
                x[k] = hhat * T::of(idx[k] as f64);
                d2 = d2 + x[k] * x[k];
            }
            if d2 < T::one() {
                points.push(x);
            }
            let mut k = dim;
            loop {
                if k == 0 {
                    break 'odometer;
                }
                k -= 1;
                if idx[k] < hi[k] {
                    idx[k] += 1;
                    break;
                }
                idx[k] = lo[k];
            }
        }
        let interior_len = points.len();
        let w_in = ball_measure::<T>(dim) / T::of_usize(interior_len);
        let mut weights = vec![w_in; interior_len];

        let m = default_direction_count(dim);
        let dirs = unit_sphere_directions::<T>(dim, m);
        let w_sp = sphere_measure::<T>(dim) / T::of_usize(m);
        for d in &dirs {
            points.push(*d);
            weights.push(w_sp);
        }

        let inv_r2 = T::one() / (r * r);
        let mut values = Vec::with_capacity(points.len());
        for x in &points {
            let mut p = *x0;
            for k in 0..dim {
                p[k] = p[k] + r * x[k];
            }
            values.push(eval(&p)? * inv_r2);
        }
        Ok(BlowupSample {
            center: *x0,
            radius: r,
            dim,
            points,
            values,
            weights,
            interior_len,
        })
    }
}

fn check_spacing<T: Real>(hhat: T) -> Result<(), Error<T>> {
    if !(hhat > T::zero()) || hhat > T::of(MAX_SAMPLE_SPACING) {
        return Err(Error::InvalidParameter(format!(
            "sample spacing must lie in (0, 1/8], got {}",
            hhat
        )));
    }
    Ok(())
}

/// Decision thresholds for the regular/singular dichotomy.
#[derive(Debug, Clone, Copy)]
pub struct Thresholds<T> {
    /// Max residual for a half-space fit to count as a match.
    pub rho_reg: T,
    /// Max residual for a quadratic fit to count as a match.
    pub rho_sing: T,
    /// Max drift of the fitted quadratic across the radius ladder.
    pub rho_drift: T,
    /// Eigenvalues below this count toward the kernel dimension (stratum).
    pub eps_ker: T,
    /// Contact threshold: classification requires u(x0) <= 2 delta.
    pub delta: T,
}

impl<T: Real> Default for Thresholds<T> {
    fn default() -> Self {
        Thresholds {
            rho_reg: T::of(0.05),
            rho_sing: T::of(0.05),
            rho_drift: T::of(0.1),
            eps_ker: T::of(0.1),
            delta: T::of(1e-4),
        }
    }
}

impl<T: Real> Thresholds<T> {
    /// Defaults with the contact threshold tied to the grid spacing, h^2.
    pub fn with_spacing(h: T) -> Self {
        Thresholds { delta: h * h, ..Thresholds::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Regular,
    Singular,
    Undetermined,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Regular => "Regular",
            Verdict::Singular => "Singular",
            Verdict::Undetermined => "Undetermined",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Both fits at one radius of the ladder.
#[derive(Debug, Clone)]
pub struct PerRadiusFit<T> {
    pub r: T,
    pub regular: RegularFit<T>,
    pub singular: SingularFit<T>,
}

/// Outcome of classifying one candidate point.
#[derive(Debug, Clone)]
pub struct ClassificationReport<T> {
    pub point: [T; 3],
    pub dim: usize,
    pub verdict: Verdict,
    /// Kernel dimension of the fitted quadratic; only for Singular.
    pub stratum: Option<usize>,
    /// Largest to smallest radius.
    pub per_radius: Vec<PerRadiusFit<T>>,
    /// Parameter drift across consecutive radii: angle between fitted
    /// directions for Regular, Frobenius distance between fitted matrices
    /// otherwise.
    pub drift: T,
}

impl<T: Real> ClassificationReport<T> {
    pub fn to_json(&self) -> serde_json::Value {
        let point: Vec<f64> = self.point[..self.dim].iter().map(|v| v.as_f64()).collect();
        let per_radius: Vec<serde_json::Value> = self
            .per_radius
            .iter()
            .map(|p| {
                let e: Vec<f64> =
                    p.regular.direction[..self.dim].iter().map(|v| v.as_f64()).collect();
                serde_json::json!({
                    "r": p.r.as_f64(),
                    "reg_residual": p.regular.residual.as_f64(),
                    "sing_residual": p.singular.residual.as_f64(),
                    "e": e,
                    "A": p.singular.matrix.to_json(),
                    "sing_converged": p.singular.converged,
                })
            })
            .collect();
        serde_json::json!({
            "point": point,
            "verdict": self.verdict.as_str(),
            "stratum": self.stratum,
            "drift": self.drift.as_f64(),
            "per_radius": per_radius,
        })
    }
}

/// Issues a verdict from prebuilt samples at strictly decreasing radii.
///
/// Regular wins when the half-space fit is below threshold and beats the
/// quadratic fit at the two smallest radii; Singular needs the quadratic
/// fit below threshold at the two smallest radii plus a small parameter
/// drift across the whole ladder; anything else is Undetermined.
pub fn classify_samples<T: Real>(
    point: &[T; 3],
    samples: &[BlowupSample<T>],
    thresholds: &Thresholds<T>,
) -> Result<ClassificationReport<T>, Error<T>> {
    if samples.len() < 2 {
        return Err(Error::Resolution(format!(
            "classification needs at least two radii, got {}",
            samples.len()
        )));
    }
    let dim = samples[0].dim();
    let mut order: Vec<usize> = (0..samples.len()).collect();
    order.sort_by(|&a, &b| {
        samples[b]
            .radius
            .partial_cmp(&samples[a].radius)
            .expect("radii are finite")
    });
    for w in order.windows(2) {
        if samples[order[0]].dim() != dim || samples[w[1]].radius >= samples[w[0]].radius {
            return Err(Error::InvalidParameter(
                "samples must share a dimension and have distinct radii".into(),
            ));
        }
    }

    let per_radius: Vec<PerRadiusFit<T>> = order
        .iter()
        .map(|&i| PerRadiusFit {
            r: samples[i].radius,
            regular: fit_regular(&samples[i]),
            singular: fit_singular(&samples[i]),
        })
        .collect();

    let finest = &per_radius[per_radius.len() - 2..];
    let regular_ok = finest
        .iter()
        .all(|p| p.regular.residual <= thresholds.rho_reg && p.regular.residual < p.singular.residual);
    let sing_drift = per_radius
        .windows(2)
        .map(|w| w[0].singular.matrix.sub(&w[1].singular.matrix).frobenius())
        .fold(T::zero(), T::max);
    let reg_drift = per_radius
        .windows(2)
        .map(|w| angle_between(dim, &w[0].regular.direction, &w[1].regular.direction))
        .fold(T::zero(), T::max);

    let (verdict, stratum, drift) = if regular_ok {
        (Verdict::Regular, None, reg_drift)
    } else {
        let singular_ok = finest.iter().all(|p| p.singular.residual <= thresholds.rho_sing)
            && sing_drift <= thresholds.rho_drift;
        if singular_ok {
            let a = &per_radius.last().expect("nonempty ladder").singular.matrix;
            let (vals, _) = a.eigen();
            let stratum = vals[..dim].iter().filter(|&&l| l < thresholds.eps_ker).count();
            (Verdict::Singular, Some(stratum), sing_drift)
        } else {
            (Verdict::Undetermined, None, sing_drift)
        }
    };

    Ok(ClassificationReport {
        point: *point,
        dim,
        verdict,
        stratum,
        per_radius,
        drift,
    })
}

/// Classifies a candidate free-boundary point of a solved field, building
/// rescaled samples at every admissible radius from the given ladder.
/// Radii that resolve fewer than four cells or whose ball leaves the
/// domain are dropped; at least two must survive.
pub fn classify_point<T: Real>(
    field: &ScalarField<T>,
    x0: &[T; 3],
    radii: &[T],
    thresholds: &Thresholds<T>,
) -> Result<ClassificationReport<T>, Error<T>> {
    classify_point_with_spacing(field, x0, radii, thresholds, T::of(DEFAULT_SAMPLE_SPACING))
}

/// Same as [`classify_point`] with an explicit sample spacing; bulk sweeps
/// use a coarser lattice to trade sampling density for throughput.
pub fn classify_point_with_spacing<T: Real>(
    field: &ScalarField<T>,
    x0: &[T; 3],
    radii: &[T],
    thresholds: &Thresholds<T>,
    hhat: T,
) -> Result<ClassificationReport<T>, Error<T>> {
    let g = *field.grid();
    let u0 = field.interpolate(x0)?;
    // free-boundary points extracted at threshold delta carry values up to
    // delta itself, hence the factor-two guard
    if u0 > T::of(2.0) * thresholds.delta {
        return Err(Error::NotFreeBoundary {
            point: point_f64(x0),
            value: u0.as_f64(),
        });
    }

    let mut ladder: Vec<T> = radii.to_vec();
    ladder.sort_by(|a, b| b.partial_cmp(a).expect("radii are finite"));
    ladder.dedup();
    let mut samples = Vec::new();
    for &r in &ladder {
        if r >= T::of(4.0) * g.h() && g.ball_inside(x0, r) {
            samples.push(BlowupSample::rescale(field, x0, r, hhat)?);
        }
    }
    if samples.len() < 2 {
        return Err(Error::Resolution(format!(
            "only {} of {} radii admissible at h = {} around the point",
            samples.len(),
            ladder.len(),
            g.h().as_f64()
        )));
    }
    classify_samples(x0, &samples, thresholds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::{assemble_lcp, solve_psor};
    use crate::grid::Grid;
    use crate::linalg::SymMat;
    use approx::assert_abs_diff_eq;

    const HHAT: f64 = DEFAULT_SAMPLE_SPACING;

    fn diag2(a: f64, b: f64) -> SymMat<f64> {
        let mut m = SymMat::zeros(2);
        m.set_sym(0, 0, a);
        m.set_sym(1, 1, b);
        m
    }

    #[test]
    fn sample_geometry_is_normalized() {
        for dim in 1..=3usize {
            let hh = if dim == 3 { 1.0 / 8.0 } else { HHAT };
            let s = BlowupSample::from_fn(dim, |_| 1.0, &[0.0; 3], 1.0, hh).unwrap();
            assert!(s.interior_len() > 0);
            assert!(s.points().len() > s.interior_len());
            for p in s.points() {
                let r2: f64 = p[..dim].iter().map(|v| v * v).sum();
                assert!(r2 <= 1.0 + 1e-12);
            }
            assert!(s.weights().iter().all(|&w| w > 0.0));
            let interior: f64 = s.weights()[..s.interior_len()].iter().sum();
            let sphere: f64 = s.weights()[s.interior_len()..].iter().sum();
            let expect = [2.0, std::f64::consts::PI, 4.0 * std::f64::consts::PI / 3.0][dim - 1];
            let expect_s =
                [2.0, 2.0 * std::f64::consts::PI, 4.0 * std::f64::consts::PI][dim - 1];
            assert_abs_diff_eq!(interior, expect, epsilon = 1e-12);
            assert_abs_diff_eq!(sphere, expect_s, epsilon = 1e-12);
        }
    }

    #[test]
    fn rescale_validates_radius_domain_and_spacing() {
        let g = Grid::new(2, [33, 33, 1], 1.0 / 16.0, [-1.0, -1.0, 0.0]).unwrap();
        let u = ScalarField::from_fn(g, |p| 0.5 * p[0] * p[0]);
        assert!(matches!(
            BlowupSample::rescale(&u, &[0.0; 3], 2.0 * g.h(), HHAT),
            Err(Error::Resolution(_))
        ));
        assert!(matches!(
            BlowupSample::rescale(&u, &[0.9, 0.0, 0.0], 0.5, HHAT),
            Err(Error::OutOfDomain(_))
        ));
        assert!(BlowupSample::rescale(&u, &[0.0; 3], 0.5, 0.25).is_err());
        assert!(BlowupSample::rescale(&u, &[0.0; 3], 0.5, HHAT).is_ok());
    }

    #[test]
    fn rescaling_a_nodal_quadratic_reproduces_it_exactly() {
        // r and hhat chosen so every sample point lands on a grid node,
        // where the multilinear interpolant is exact
        let g = Grid::new(2, [129, 129, 1], 2.0 / 128.0, [-1.0, -1.0, 0.0]).unwrap();
        let u = ScalarField::from_fn(g, |p| 0.5 * p[0] * p[0]);
        let s = BlowupSample::rescale(&u, &[0.0; 3], 0.25, HHAT).unwrap();
        let n = s.interior_len();
        for (x, &v) in s.points()[..n].iter().zip(&s.values()[..n]) {
            assert_abs_diff_eq!(v, 0.5 * x[0] * x[0], epsilon = 1e-14);
        }
        // sphere samples sit off the lattice, so they only match to the
        // bilinear interpolation error h^2/8 scaled by 1/r^2
        for (x, &v) in s.points()[n..].iter().zip(&s.values()[n..]) {
            assert_abs_diff_eq!(v, 0.5 * x[0] * x[0], epsilon = 1e-3);
        }
    }

    #[test]
    fn fits_of_a_homogeneous_field_are_radius_independent() {
        let f = |p: &[f64; 3]| 0.5 * p[0] * p[0];
        let fits: Vec<_> = [0.5, 0.25, 0.125]
            .iter()
            .map(|&r| {
                let s = BlowupSample::from_fn(2, f, &[0.0; 3], r, HHAT).unwrap();
                (fit_regular(&s), fit_singular(&s))
            })
            .collect();
        for pair in fits.windows(2) {
            let (ra, sa) = &pair[0];
            let (rb, sb) = &pair[1];
            assert!(angle_between(2, &ra.direction, &rb.direction) <= 1e-8);
            assert!(sa.matrix.sub(&sb.matrix).frobenius() <= 1e-8);
            assert_abs_diff_eq!(sa.residual, sb.residual, epsilon = 1e-8);
        }
    }

    #[test]
    fn exact_profile_verdicts_come_out_correct() {
        // spot checks from the dichotomy corpus; the full sweep runs in the
        // acceptance suite
        let th = Thresholds::default();
        let radii = [0.5, 0.25];
        for k in [0usize, 3, 7, 12] {
            let ang = 2.0 * std::f64::consts::PI * k as f64 / 16.0;
            let e = [ang.cos(), ang.sin(), 0.0];
            let samples: Vec<_> = radii
                .iter()
                .map(|&r| {
                    BlowupSample::from_fn(
                        2,
                        |p| 0.5 * (e[0] * p[0] + e[1] * p[1]).max(0.0).powi(2),
                        &[0.0; 3],
                        r,
                        HHAT,
                    )
                    .unwrap()
                })
                .collect();
            let rep = classify_samples(&[0.0; 3], &samples, &th).unwrap();
            assert_eq!(rep.verdict, Verdict::Regular, "direction {}", k);
            let fitted = &rep.per_radius.last().unwrap().regular.direction;
            assert!(angle_between(2, fitted, &e) <= 1e-3);
        }
        for j in [0usize, 5, 10] {
            let a = j as f64 / 10.0;
            let samples: Vec<_> = radii
                .iter()
                .map(|&r| {
                    BlowupSample::from_fn(
                        2,
                        |p| 0.5 * (a * p[0] * p[0] + (1.0 - a) * p[1] * p[1]),
                        &[0.0; 3],
                        r,
                        HHAT,
                    )
                    .unwrap()
                })
                .collect();
            let rep = classify_samples(&[0.0; 3], &samples, &th).unwrap();
            assert_eq!(rep.verdict, Verdict::Singular, "diagonal {}", j);
            let fitted = &rep.per_radius.last().unwrap().singular.matrix;
            assert!(fitted.sub(&diag2(a, 1.0 - a)).frobenius() <= 1e-3);
            let expect_stratum = [a, 1.0 - a].iter().filter(|&&l| l < 0.1).count();
            assert_eq!(rep.stratum, Some(expect_stratum));
        }
    }

    #[test]
    fn classifying_a_solved_singular_line_point() {
        let g = Grid::new(2, [129, 129, 1], 2.0 / 128.0, [-1.0, -1.0, 0.0]).unwrap();
        let rhs = ScalarField::from_fn(g, |_| 1.0);
        let b = ScalarField::from_fn(g, |p| 0.5 * p[0] * p[0]);
        let problem = assemble_lcp(g, &rhs, &b).unwrap();
        let u = solve_psor(&problem, 1.9, 1e-10, 200_000).unwrap().0;

        let th = Thresholds::with_spacing(g.h());
        let rep = classify_point(&u, &[0.0, 0.3, 0.0], &[0.5, 0.25], &th).unwrap();
        assert_eq!(rep.verdict, Verdict::Singular);
        assert_eq!(rep.stratum, Some(1));
        let a = &rep.per_radius.last().unwrap().singular.matrix;
        assert!(a.sub(&diag2(1.0, 0.0)).frobenius() <= 1e-3);
        assert!(rep.drift <= 1e-3);

        let json = rep.to_json();
        assert_eq!(json["verdict"], "Singular");
        assert_eq!(json["stratum"], 1);
        assert!(json["per_radius"].as_array().unwrap().len() == 2);
    }

    #[test]
    fn classifying_a_regular_point_of_the_radial_problem() {
        let g = Grid::new(2, [129, 129, 1], 2.0 / 128.0, [-1.0, -1.0, 0.0]).unwrap();
        let rho = 0.5f64;
        let exact = move |p: &[f64; 3]| {
            let r = (p[0] * p[0] + p[1] * p[1]).sqrt();
            if r <= rho {
                0.0
            } else {
                (r * r - rho * rho) / 4.0 - (rho * rho / 2.0) * (r / rho).ln()
            }
        };
        let rhs = ScalarField::from_fn(g, |_| 1.0);
        let b = ScalarField::from_fn(g, exact);
        let problem = assemble_lcp(g, &rhs, &b).unwrap();
        let u = solve_psor(&problem, 1.9, 1e-10, 200_000).unwrap().0;

        let th = Thresholds::with_spacing(g.h());
        let rep = classify_point(&u, &[0.5, 0.0, 0.0], &[0.125, 0.0625], &th).unwrap();
        assert_eq!(rep.verdict, Verdict::Regular);
        assert!(rep.stratum.is_none());
        let e = &rep.per_radius.last().unwrap().regular.direction;
        let deg = angle_between(2, e, &[1.0, 0.0, 0.0]).to_degrees();
        assert!(deg <= 5.0, "direction off the radial axis by {} degrees", deg);
    }

    #[test]
    fn points_inside_the_positivity_set_are_rejected() {
        let g = Grid::new(2, [65, 65, 1], 2.0 / 64.0, [-1.0, -1.0, 0.0]).unwrap();
        let u = ScalarField::from_fn(g, |p| 0.5 * p[0] * p[0]);
        let th = Thresholds::with_spacing(g.h());
        match classify_point(&u, &[0.5, 0.0, 0.0], &[0.25, 0.125], &th) {
            Err(Error::NotFreeBoundary { value, .. }) => {
                assert_abs_diff_eq!(value, 0.125, epsilon = 1e-12)
            }
            other => panic!("expected a free-boundary guard error, got {:?}", other),
        }
    }

    #[test]
    fn too_few_admissible_radii_is_a_resolution_error() {
        let g = Grid::new(2, [65, 65, 1], 2.0 / 64.0, [-1.0, -1.0, 0.0]).unwrap();
        let u = ScalarField::zeros(g);
        let th = Thresholds::with_spacing(g.h());
        // one radius below 4h, one leaving the box: nothing admissible
        let got = classify_point(&u, &[0.9, 0.0, 0.0], &[2.0 * g.h(), 0.5], &th);
        assert!(matches!(got, Err(Error::Resolution(_))));
    }
}
