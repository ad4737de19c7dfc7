//! Contact sets, free-boundary points and quadratic growth diagnostics.
//!
//! The contact set of a solved field is read off by thresholding at a small
//! delta (default h^2, the natural scale: the solution grows quadratically
//! off the free boundary, so thresholding misplaces the boundary by O(h)
//! only). Free-boundary points are then localized on grid-cell edges where
//! the threshold is crossed, by linear interpolation, which gives sub-grid
//! positions for the blow-up classifier to center on.

use crate::error::Error;
use crate::grid::{point_f64, ScalarField};
use crate::scalar::Real;

/// Thresholded contact set and interpolated free-boundary points.
#[derive(Debug, Clone)]
pub struct ContactGeometry<T> {
    /// Per-node flag for u < delta, row-major like the field.
    pub zero_mask: Vec<bool>,
    /// Points on cell edges where u crosses delta, one per crossing edge.
    pub fb_points: Vec<[T; 3]>,
    pub delta: T,
}

impl<T: Real> ContactGeometry<T> {
    pub fn masked_count(&self) -> usize {
        self.zero_mask.iter().filter(|&&m| m).count()
    }

    /// Mask as a 0/1 field on the source grid, for snapshot output.
    pub fn mask_field(&self, like: &ScalarField<T>) -> ScalarField<T> {
        let values = self
            .zero_mask
            .iter()
            .map(|&m| if m { T::one() } else { T::zero() })
            .collect();
        ScalarField::from_values(*like.grid(), values).expect("mask length matches the grid")
    }
}

/// Thresholds the field at `delta` and places free-boundary points on every
/// edge joining a masked node (u < delta) to an unmasked one, by linear
/// interpolation of u - delta along the edge.
pub fn contact_set<T: Real>(
    field: &ScalarField<T>,
    delta: T,
) -> Result<ContactGeometry<T>, Error<T>> {
    if !(delta > T::zero()) || !delta.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "contact threshold must be positive and finite, got {}",
            delta
        )));
    }
    let g = *field.grid();
    let vals = field.values();
    let mask: Vec<bool> = vals.iter().map(|&v| v < delta).collect();

    let s = g.strides();
    let mut fb_points = Vec::new();
    for idx in 0..g.node_count() {
        let m = g.multi(idx);
        for k in 0..g.dim() {
            if m[k] + 1 == g.extent()[k] {
                continue;
            }
            let nb = idx + s[k];
            if mask[idx] == mask[nb] {
                continue;
            }
            // u - delta changes sign along this edge; place the crossing
            let (a, b) = (vals[idx], vals[nb]);
            let t = (delta - a) / (b - a);
            let mut p = g.coord(m);
            p[k] = p[k] + g.h() * t;
            fb_points.push(p);
        }
    }
    Ok(ContactGeometry { zero_mask: mask, fb_points, delta })
}

/// Walks a thresholded free-boundary point toward the actual zero set of
/// the field. A point extracted at threshold delta sits about sqrt(2 delta)
/// outside the contact set, because the solution grows quadratically off
/// the free boundary; that offset is comparable to the smallest admissible
/// blow-up radius and would poison profile fits there. Each round steps by
/// the quadratic growth length sqrt(2u) along -grad u, which is exact for
/// both half-space and polynomial profiles. A step is kept only if it cuts
/// the value by at least 4x, the decrease an actual quadratic delivers;
/// anything weaker means the walk has left the regime where interpolated
/// values track distance (a flat contact cell, a kink), so it stops there
/// rather than wander.
pub fn refine_center<T: Real>(field: &ScalarField<T>, p: &[T; 3], rounds: usize) -> [T; 3] {
    let g = *field.grid();
    let h = g.h();
    let mut x = *p;
    let mut u = match field.interpolate(&x) {
        Ok(v) => v,
        Err(_) => return x,
    };
    for _ in 0..rounds {
        if u <= T::zero() {
            break;
        }
        let mut grad = [T::zero(); 3];
        let mut norm2 = T::zero();
        for k in 0..g.dim() {
            let mut a = x;
            let mut b = x;
            a[k] = (x[k] - h).max(g.origin()[k]);
            b[k] = (x[k] + h).min(g.upper()[k]);
            let (ua, ub) = match (field.interpolate(&a), field.interpolate(&b)) {
                (Ok(ua), Ok(ub)) => (ua, ub),
                _ => return x,
            };
            grad[k] = (ub - ua) / (b[k] - a[k]);
            norm2 = norm2 + grad[k] * grad[k];
        }
        let norm = norm2.sqrt();
        if norm <= T::of(1e-30) {
            break;
        }
        let step = (T::of(2.0) * u).sqrt();
        let mut cand = x;
        for k in 0..g.dim() {
            cand[k] = cand[k] - grad[k] / norm * step;
        }
        if !g.contains(&cand) {
            break;
        }
        let u_cand = match field.interpolate(&cand) {
            Ok(v) => v,
            Err(_) => break,
        };
        if u_cand >= u * T::of(0.25) {
            break;
        }
        x = cand;
        u = u_cand;
    }
    x
}

/// Growth diagnostics around a free-boundary point: for each admissible
/// radius, the ratio sup over the closed ball of u, divided by r^2.
#[derive(Debug, Clone)]
pub struct GrowthDiagnostics<T> {
    /// (r, sup u / r^2) in increasing r.
    pub ratios: Vec<(T, T)>,
    /// Radii that were rejected: ball leaving the box, or r < 4h.
    pub skipped: Vec<T>,
}

/// Computes sup_{B_r(x0)} u / r^2 over the provided radii. Radii whose ball
/// leaves the domain, or which fall below the resolution floor 4h, are
/// skipped and reported in `skipped` rather than failing the whole call.
pub fn growth_ratio<T: Real>(
    field: &ScalarField<T>,
    x0: &[T; 3],
    radii: &[T],
) -> Result<GrowthDiagnostics<T>, Error<T>> {
    let g = *field.grid();
    if !g.contains(x0) {
        return Err(Error::OutOfDomain(point_f64(x0)));
    }
    let h = g.h();
    let mut ratios = Vec::new();
    let mut skipped = Vec::new();
    for &r in radii {
        if !(r > T::zero()) || !r.is_finite() {
            return Err(Error::InvalidParameter(format!("bad radius {}", r)));
        }
        if r < T::of(4.0) * h || !g.ball_inside(x0, r) {
            skipped.push(r);
            continue;
        }
        let sup = sup_on_ball(field, x0, r);
        ratios.push((r, sup / (r * r)));
    }
    ratios.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("radii are finite"));
    Ok(GrowthDiagnostics { ratios, skipped })
}

/// Max of the field over grid nodes in the closed ball.
fn sup_on_ball<T: Real>(field: &ScalarField<T>, x0: &[T; 3], r: T) -> T {
    let g = *field.grid();
    let mut lo = [0usize; 3];
    let mut hi = [0usize; 3];
    for k in 0..g.dim() {
        let from = ((x0[k] - r - g.origin()[k]) / g.h()).floor().max(T::zero());
        let to = ((x0[k] + r - g.origin()[k]) / g.h()).ceil();
        lo[k] = from.as_f64() as usize;
        hi[k] = (to.as_f64() as usize).min(g.extent()[k] - 1);
    }
    let r2 = r * r;
    let mut sup = T::neg_infinity();
    let mut m = lo;
    loop {
        let p = g.coord(m);
        let mut d2 = T::zero();
        for k in 0..g.dim() {
            let d = p[k] - x0[k];
            d2 = d2 + d * d;
        }
        // tiny slack so nodes meant to sit exactly on the sphere count
        if d2 <= r2 * (T::one() + T::of(1e-12)) {
            sup = sup.max(field.values()[g.linear(m)]);
        }
        // advance the multi-index odometer over [lo, hi]
        let mut k = g.dim();
        loop {
            if k == 0 {
                return sup;
            }
            k -= 1;
            if m[k] < hi[k] {
                m[k] += 1;
                break;
            }
            m[k] = lo[k];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::{assemble_lcp, solve_psor};
    use crate::grid::Grid;
    use approx::assert_abs_diff_eq;

    fn square(n: usize) -> Grid<f64> {
        let h = 2.0 / (n as f64 - 1.0);
        Grid::new(2, [n, n, 1], h, [-1.0, -1.0, 0.0]).unwrap()
    }

    /// Exact solution of the radial problem with contact disc of radius rho.
    fn radial_solution(rho: f64) -> impl Fn(&[f64; 3]) -> f64 {
        move |p: &[f64; 3]| {
            let r = (p[0] * p[0] + p[1] * p[1]).sqrt();
            if r <= rho {
                0.0
            } else {
                (r * r - rho * rho) / 4.0 - (rho * rho / 2.0) * (r / rho).ln()
            }
        }
    }

    fn solve_radial(n: usize) -> ScalarField<f64> {
        let g = square(n);
        let rhs = ScalarField::from_fn(g, |_| 1.0);
        let b = ScalarField::from_fn(g, radial_solution(0.5));
        let p = assemble_lcp(g, &rhs, &b).unwrap();
        solve_psor(&p, 1.9, 1e-10, 200_000).unwrap().0
    }

    fn hausdorff(a: &[[f64; 3]], b: &[[f64; 3]]) -> f64 {
        let one_sided = |from: &[[f64; 3]], to: &[[f64; 3]]| {
            from.iter()
                .map(|p| {
                    to.iter()
                        .map(|q| {
                            ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2))
                                .sqrt()
                        })
                        .fold(f64::INFINITY, f64::min)
                })
                .fold(0.0, f64::max)
        };
        one_sided(a, b).max(one_sided(b, a))
    }

    #[test]
    fn zero_field_is_fully_masked_with_no_boundary() {
        let g = square(9);
        let u = ScalarField::zeros(g);
        let geo = contact_set(&u, 1e-4).unwrap();
        assert_eq!(geo.masked_count(), g.node_count());
        assert!(geo.fb_points.is_empty());
    }

    #[test]
    fn half_x1_squared_yields_two_symmetric_lines() {
        // With delta = h^2/4 only the x1 = 0 node line is masked, and the
        // crossing of u - delta on the adjacent edges sits exactly at the
        // edge midpoint: two lines at x1 = -h/2 and x1 = +h/2.
        let g = square(33);
        let h = g.h();
        let delta = h * h / 4.0;
        let u = ScalarField::from_fn(g, |p| 0.5 * p[0] * p[0]);
        let geo = contact_set(&u, delta).unwrap();

        let expected_masked = 33; // one column of nodes
        assert_eq!(geo.masked_count(), expected_masked);
        for idx in 0..g.node_count() {
            let x1 = g.coord(g.multi(idx))[0];
            assert_eq!(geo.zero_mask[idx], x1.abs() < (2.0 * delta).sqrt());
        }
        assert!(!geo.fb_points.is_empty());
        for p in &geo.fb_points {
            assert_abs_diff_eq!(p[0].abs(), h / 2.0, epsilon = 1e-13);
            assert!(p[0].abs() <= h, "crossing further than one spacing out");
        }
    }

    #[test]
    fn radial_free_boundary_sits_on_the_contact_circle() {
        let u = solve_radial(65);
        let h = u.grid().h();
        let geo = contact_set(&u, h * h).unwrap();
        assert!(geo.fb_points.len() > 20);
        for p in &geo.fb_points {
            let r = (p[0] * p[0] + p[1] * p[1]).sqrt();
            assert!(
                (r - 0.5).abs() <= 2.0 * h,
                "free-boundary point at radius {}, expected 0.5 +- {}",
                r,
                2.0 * h
            );
        }
    }

    #[test]
    fn refining_the_grid_moves_the_free_boundary_by_at_most_4h() {
        let coarse = solve_radial(65);
        let fine = solve_radial(129);
        let hc = coarse.grid().h();
        let hf = fine.grid().h();
        let geo_c = contact_set(&coarse, hc * hc).unwrap();
        let geo_f = contact_set(&fine, hf * hf).unwrap();
        let d = hausdorff(&geo_c.fb_points, &geo_f.fb_points);
        assert!(d <= 4.0 * hc, "Hausdorff distance {} exceeds 4h = {}", d, 4.0 * hc);
    }

    #[test]
    fn refinement_pulls_thresholded_points_onto_the_zero_set() {
        // Interior parabola: crossings of u = h^2 sit at x1 = +-4h/3, a
        // third of the smallest admissible blow-up radius away from the
        // actual zero line. One growth step recovers most of that.
        let g = square(65);
        let h = g.h();
        let u = ScalarField::from_fn(g, |p| 0.5 * p[0] * p[0]);
        let geo = contact_set(&u, h * h).unwrap();
        assert!(!geo.fb_points.is_empty());
        for p in &geo.fb_points {
            assert_abs_diff_eq!(p[0].abs(), 4.0 * h / 3.0, epsilon = 1e-12);
            let q = refine_center(&u, p, 8);
            assert!(
                q[0].abs() <= 0.2 * h,
                "refined to x1 = {}, expected within 0.2h of the line",
                q[0] / h
            );
            assert_eq!(q[1], p[1]);
        }

        // One-sided profile: the support edge is the plane x1 = 0.3, and
        // the walk must not slide into the flat contact side.
        let edge = 0.3;
        let v = ScalarField::from_fn(g, |p| 0.5 * (p[0] - edge).max(0.0).powi(2));
        let geo = contact_set(&v, h * h).unwrap();
        assert!(!geo.fb_points.is_empty());
        for p in geo.fb_points.iter().filter(|p| p[1].abs() < 0.9) {
            let q = refine_center(&v, p, 8);
            assert!(
                (q[0] - edge).abs() <= 0.2 * h,
                "refined to x1 = {}, expected within 0.2h of the edge",
                (q[0] - edge) / h
            );
        }

        // Solved radial problem: refined points should hug the contact
        // circle more tightly than the raw 2h extraction guarantee.
        let w = solve_radial(65);
        let hw = w.grid().h();
        let geo = contact_set(&w, hw * hw).unwrap();
        for p in &geo.fb_points {
            let q = refine_center(&w, p, 8);
            let r = (q[0] * q[0] + q[1] * q[1]).sqrt();
            assert!(
                (r - 0.5).abs() <= 0.75 * hw,
                "refined radius {} strays {}h from the circle",
                r,
                (r - 0.5).abs() / hw
            );
        }
    }

    #[test]
    fn growth_ratio_of_quadratic_profiles_is_one_half() {
        let g = square(129);
        let radii = [0.0625, 0.125, 0.25, 0.5];
        for field in [
            ScalarField::from_fn(g, |p| 0.5 * p[0] * p[0]),
            ScalarField::from_fn(g, |p| 0.5 * p[0].max(0.0).powi(2)),
        ] {
            let diag = growth_ratio(&field, &[0.0; 3], &radii).unwrap();
            assert_eq!(diag.ratios.len(), 4);
            assert!(diag.skipped.is_empty());
            for &(_, ratio) in &diag.ratios {
                assert_abs_diff_eq!(ratio, 0.5, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn growth_ratios_on_the_radial_problem_stay_in_range() {
        let u = solve_radial(129);
        let h = u.grid().h();
        let x0 = [0.5, 0.0, 0.0];
        let radii: Vec<f64> = (0..5).map(|k| 0.25 / 2f64.powi(k)).collect();
        let diag = growth_ratio(&u, &x0, &radii).unwrap();
        for &(r, ratio) in &diag.ratios {
            assert!(r >= 8.0 * h || r >= 4.0 * h);
            assert!(
                (0.05..=1.0).contains(&ratio),
                "ratio {} at r = {} outside [0.05, 1]",
                ratio,
                r
            );
        }
    }

    #[test]
    fn inadmissible_radii_are_skipped_and_flagged() {
        let g = square(33);
        let u = ScalarField::from_fn(g, |p| 0.5 * p[0] * p[0]);
        let h = g.h();
        // one radius below 4h, one pushing the ball out of the box
        let diag = growth_ratio(&u, &[0.5, 0.0, 0.0], &[2.0 * h, 0.8, 0.25]).unwrap();
        assert_eq!(diag.skipped.len(), 2);
        assert_eq!(diag.ratios.len(), 1);
        assert!(growth_ratio(&u, &[1.5, 0.0, 0.0], &[0.1]).is_err());
        assert!(contact_set(&u, -1.0).is_err());
    }

    #[test]
    fn fb_points_lie_between_masked_and_unmasked_nodes() {
        let u = solve_radial(65);
        let g = *u.grid();
        let h = g.h();
        let geo = contact_set(&u, h * h).unwrap();
        for p in &geo.fb_points {
            // the crossing must sit within one spacing of both a masked and
            // an unmasked node
            let m = g.nearest_node(p);
            let idx = g.linear(m);
            let near_mask = geo.zero_mask[idx];
            let mut found_other = false;
            let s = g.strides();
            for k in 0..g.dim() {
                if m[k] > 0 && geo.zero_mask[idx - s[k]] != near_mask {
                    found_other = true;
                }
                if m[k] + 1 < g.extent()[k] && geo.zero_mask[idx + s[k]] != near_mask {
                    found_other = true;
                }
            }
            assert!(found_other, "point {:?} is not on a mask transition", p);
        }
    }
}
