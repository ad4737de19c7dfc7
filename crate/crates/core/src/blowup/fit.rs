//! Least-squares fits of rescaled samples against the two model families:
//! half-space profiles 0.5 * ((e.x)_+)^2 over unit directions e, and
//! quadratic profiles 0.5 * x'Ax over unit-trace PSD matrices A.
//!
//! Both fits minimize the weighted L2 distance over the unit ball, using
//! the interior part of the sample. The half-space family is compact but
//! nonconvex, so it is handled by a coarse direction scan plus a local
//! 1D refinement; the quadratic family is a convex spectahedron, handled
//! by projected gradient descent with a fixed step.

use super::psd::project_psd_trace1;
use super::BlowupSample;
use crate::linalg::{norm, scale, sym_eigen, SymMat};
use crate::scalar::Real;

/// Best half-space profile: direction of steepest quadratic growth.
#[derive(Debug, Clone)]
pub struct RegularFit<T> {
    /// Unit vector, padded with zeros past the dimension.
    pub direction: [T; 3],
    /// Weighted L2 distance between the sample and the fitted profile.
    pub residual: T,
}

/// Best quadratic profile over the unit-trace PSD matrices.
#[derive(Debug, Clone)]
pub struct SingularFit<T> {
    pub matrix: SymMat<T>,
    /// Weighted L2 distance between the sample and the fitted profile.
    pub residual: T,
    pub iterations: usize,
    /// False when the iteration cap was reached before the projected
    /// gradient dropped below tolerance; the best iterate is still returned.
    pub converged: bool,
}

fn half_space<T: Real>(dim: usize, e: &[T; 3], x: &[T; 3]) -> T {
    let mut d = T::zero();
    for k in 0..dim {
        d = d + e[k] * x[k];
    }
    let p = d.max(T::zero());
    T::of(0.5) * p * p
}

/// Weighted squared L2 error of a direction over the interior samples.
fn regular_objective<T: Real>(s: &BlowupSample<T>, e: &[T; 3]) -> T {
    let dim = s.dim();
    let mut acc = T::zero();
    for j in 0..s.interior_len() {
        let d = s.values()[j] - half_space(dim, e, &s.points()[j]);
        acc = acc + s.weights()[j] * d * d;
    }
    acc
}

/// Fits the half-space family by scanning directions and refining locally.
/// The direction is resolved well below 1e-6; the residual is the attained
/// L2 distance.
pub fn fit_regular<T: Real>(sample: &BlowupSample<T>) -> RegularFit<T> {
    let dim = sample.dim();
    let (best_e, best_obj) = match dim {
        1 => {
            let plus = [T::one(), T::zero(), T::zero()];
            let minus = [-T::one(), T::zero(), T::zero()];
            let (op, om) = (regular_objective(sample, &plus), regular_objective(sample, &minus));
            if op <= om {
                (plus, op)
            } else {
                (minus, om)
            }
        }
        2 => fit_regular_2d(sample),
        _ => fit_regular_3d(sample),
    };
    RegularFit { direction: best_e, residual: best_obj.max(T::zero()).sqrt() }
}

fn angle_dir<T: Real>(theta: T) -> [T; 3] {
    [theta.cos(), theta.sin(), T::zero()]
}

fn fit_regular_2d<T: Real>(sample: &BlowupSample<T>) -> ([T; 3], T) {
    let coarse = 128usize;
    let two_pi = T::of(2.0) * T::PI();
    let cell = two_pi / T::of_usize(coarse);
    let mut best = (T::zero(), T::infinity());
    for k in 0..coarse {
        let th = cell * T::of_usize(k);
        let v = regular_objective(sample, &angle_dir(th));
        if v < best.1 {
            best = (th, v);
        }
    }
    // golden-section refinement inside the bracketing pair of cells
    let gold = (T::of(5.0).sqrt() - T::one()) / T::of(2.0);
    let mut lo = best.0 - cell;
    let mut hi = best.0 + cell;
    let mut x1 = hi - gold * (hi - lo);
    let mut x2 = lo + gold * (hi - lo);
    let mut f1 = regular_objective(sample, &angle_dir(x1));
    let mut f2 = regular_objective(sample, &angle_dir(x2));
    while hi - lo > T::of(1e-9) {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gold * (hi - lo);
            f1 = regular_objective(sample, &angle_dir(x1));
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gold * (hi - lo);
            f2 = regular_objective(sample, &angle_dir(x2));
        }
    }
    let th = (lo + hi) / T::of(2.0);
    (angle_dir(th), regular_objective(sample, &angle_dir(th)))
}

fn fit_regular_3d<T: Real>(sample: &BlowupSample<T>) -> ([T; 3], T) {
    // coarse pass over a Fibonacci point set
    let m = 512usize;
    let golden = (T::of(5.0).sqrt() - T::one()) / T::of(2.0);
    let two_pi = T::of(2.0) * T::PI();
    let mut best_e = [T::zero(); 3];
    let mut best_v = T::infinity();
    for j in 0..m {
        let z = T::one() - (T::of(2.0) * T::of_usize(j) + T::one()) / T::of_usize(m);
        let rho = (T::one() - z * z).max(T::zero()).sqrt();
        let phi = two_pi * golden * T::of_usize(j);
        let e = [rho * phi.cos(), rho * phi.sin(), z];
        let v = regular_objective(sample, &e);
        if v < best_v {
            best_v = v;
            best_e = e;
        }
    }
    // local pattern search in the tangent plane, shrinking the stencil
    let mut step = T::of(0.2);
    while step > T::of(1e-8) {
        let (t1, t2) = tangent_basis(&best_e);
        let mut improved = false;
        for di in -1i32..=1 {
            for dj in -1i32..=1 {
                if di == 0 && dj == 0 {
                    continue;
                }
                let mut e = best_e;
                for k in 0..3 {
                    e[k] = e[k] + step * (T::of(di as f64) * t1[k] + T::of(dj as f64) * t2[k]);
                }
                let n = norm(3, &e);
                let e = scale(3, &e, T::one() / n);
                let v = regular_objective(sample, &e);
                if v < best_v {
                    best_v = v;
                    best_e = e;
                    improved = true;
                }
            }
        }
        if !improved {
            step = step * T::of(0.5);
        }
    }
    (best_e, best_v)
}

fn tangent_basis<T: Real>(e: &[T; 3]) -> ([T; 3], [T; 3]) {
    // pick the axis least aligned with e to seed an orthogonal frame
    let mut axis = [T::zero(); 3];
    let mut least = 0;
    for k in 1..3 {
        if e[k].abs() < e[least].abs() {
            least = k;
        }
    }
    axis[least] = T::one();
    let c1 = [
        e[1] * axis[2] - e[2] * axis[1],
        e[2] * axis[0] - e[0] * axis[2],
        e[0] * axis[1] - e[1] * axis[0],
    ];
    let n1 = norm(3, &c1);
    let t1 = scale(3, &c1, T::one() / n1);
    let c2 = [
        e[1] * t1[2] - e[2] * t1[1],
        e[2] * t1[0] - e[0] * t1[2],
        e[0] * t1[1] - e[1] * t1[0],
    ];
    let n2 = norm(3, &c2);
    (t1, scale(3, &c2, T::one() / n2))
}

/// Coordinates of Sym(dim) in an orthonormal basis: diagonal entries first,
/// then upper off-diagonal entries scaled by sqrt(2).
fn sym_pairs(dim: usize) -> Vec<(usize, usize)> {
    let mut pairs: Vec<(usize, usize)> = (0..dim).map(|i| (i, i)).collect();
    for i in 0..dim {
        for j in (i + 1)..dim {
            pairs.push((i, j));
        }
    }
    pairs
}

fn mat_to_coords<T: Real>(a: &SymMat<T>, pairs: &[(usize, usize)]) -> Vec<T> {
    let r2 = T::of(2.0).sqrt();
    pairs
        .iter()
        .map(|&(i, j)| if i == j { a.get(i, i) } else { r2 * a.get(i, j) })
        .collect()
}

fn coords_to_mat<T: Real>(dim: usize, a: &[T], pairs: &[(usize, usize)]) -> SymMat<T> {
    let r2 = T::of(2.0).sqrt();
    let mut m = SymMat::zeros(dim);
    for (k, &(i, j)) in pairs.iter().enumerate() {
        if i == j {
            m.set_sym(i, i, a[k]);
        } else {
            m.set_sym(i, j, a[k] / r2);
        }
    }
    m
}

/// Fits the quadratic family by projected gradient descent on the
/// spectahedron, starting from the isotropic profile, with the fixed step
/// 0.5 / L set by the largest curvature of the quadratic objective.
pub fn fit_singular<T: Real>(sample: &BlowupSample<T>) -> SingularFit<T> {
    fit_singular_traced(sample, None)
}

pub(crate) fn fit_singular_traced<T: Real>(
    sample: &BlowupSample<T>,
    mut trace: Option<&mut Vec<T>>,
) -> SingularFit<T> {
    let dim = sample.dim();
    let pairs = sym_pairs(dim);
    let d = pairs.len();

    // basis evaluations b_jk = 0.5 * x_j' B_k x_j, so the profile value is
    // the inner product of the coordinate vector with b_j
    let r2 = T::of(2.0).sqrt();
    let nint = sample.interior_len();
    let mut b = vec![T::zero(); nint * d];
    for j in 0..nint {
        let x = &sample.points()[j];
        for (k, &(p, q)) in pairs.iter().enumerate() {
            b[j * d + k] = if p == q {
                T::of(0.5) * x[p] * x[p]
            } else {
                x[p] * x[q] / r2
            };
        }
    }

    // quadratic model: objective(a) = 0.5 a'Ha - c'a + sq
    let mut hmat = vec![T::zero(); d * d];
    let mut c = vec![T::zero(); d];
    let mut sq = T::zero();
    for j in 0..nint {
        let w = sample.weights()[j];
        let s = sample.values()[j];
        sq = sq + w * s * s;
        for k in 0..d {
            let bk = b[j * d + k];
            c[k] = c[k] + T::of(2.0) * w * s * bk;
            for l in k..d {
                hmat[k * d + l] = hmat[k * d + l] + T::of(2.0) * w * bk * b[j * d + l];
            }
        }
    }
    for k in 0..d {
        for l in 0..k {
            hmat[k * d + l] = hmat[l * d + k];
        }
    }

    let (eigs, _) = sym_eigen(d, &hmat);
    let lip = eigs[d - 1];
    let objective = |a: &[T]| {
        let mut v = sq;
        for k in 0..d {
            let mut ha = T::zero();
            for l in 0..d {
                ha = ha + hmat[k * d + l] * a[l];
            }
            v = v + a[k] * (T::of(0.5) * ha - c[k]);
        }
        v
    };

    let start = SymMat::scaled_identity(dim, T::one() / T::of_usize(dim));
    let mut a = mat_to_coords(&start, &pairs);
    if !(lip > T::zero()) {
        // degenerate sample (all points at the origin); keep the start
        let obj = objective(&a);
        return SingularFit {
            matrix: start,
            residual: obj.max(T::zero()).sqrt(),
            iterations: 0,
            converged: true,
        };
    }

    let step = T::of(0.5) / lip;
    let tol = T::of(1e-10);
    let max_iter = 10_000;
    let mut iterations = 0;
    let mut converged = false;
    if let Some(t) = trace.as_deref_mut() {
        t.push(objective(&a));
    }
    while iterations < max_iter {
        iterations += 1;
        let mut next = vec![T::zero(); d];
        for k in 0..d {
            let mut grad = -c[k];
            for l in 0..d {
                grad = grad + hmat[k * d + l] * a[l];
            }
            next[k] = a[k] - step * grad;
        }
        let projected = project_psd_trace1(&coords_to_mat(dim, &next, &pairs));
        let next = mat_to_coords(&projected, &pairs);
        let mut moved = T::zero();
        for k in 0..d {
            let dk = next[k] - a[k];
            moved = moved + dk * dk;
        }
        a = next;
        if let Some(t) = trace.as_deref_mut() {
            t.push(objective(&a));
        }
        if moved.sqrt() / step <= tol {
            converged = true;
            break;
        }
    }

    let matrix = coords_to_mat(dim, &a, &pairs);
    let obj = objective(&a);
    SingularFit {
        matrix,
        residual: obj.max(T::zero()).sqrt(),
        iterations,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::BlowupSample;
    use crate::linalg::angle_between;
    use approx::assert_abs_diff_eq;

    const HHAT: f64 = 1.0 / 16.0;

    fn sample_2d(f: impl Fn(&[f64; 3]) -> f64) -> BlowupSample<f64> {
        BlowupSample::from_fn(2, f, &[0.0; 3], 1.0, HHAT).unwrap()
    }

    fn diag2(a: f64, b: f64) -> SymMat<f64> {
        let mut m = SymMat::zeros(2);
        m.set_sym(0, 0, a);
        m.set_sym(1, 1, b);
        m
    }

    #[test]
    fn regular_fit_recovers_axis_aligned_half_spaces() {
        let s = sample_2d(|p| 0.5 * p[0].max(0.0).powi(2));
        let fit = fit_regular(&s);
        assert!(fit.residual <= 1e-3);
        assert!(angle_between(2, &fit.direction, &[1.0, 0.0, 0.0]) <= 1e-6);

        let s = sample_2d(|p| 0.5 * (-p[1]).max(0.0).powi(2));
        let fit = fit_regular(&s);
        assert!(fit.residual <= 1e-3);
        assert!(angle_between(2, &fit.direction, &[0.0, -1.0, 0.0]) <= 1e-6);
    }

    #[test]
    fn regular_fit_cannot_explain_a_full_quadratic() {
        // brute-force floor over a dense direction grid, then check the
        // optimizer lands on the same value
        let s = sample_2d(|p| 0.5 * p[0] * p[0]);
        let mut brute = f64::INFINITY;
        for k in 0..4096 {
            let th = 2.0 * std::f64::consts::PI * k as f64 / 4096.0;
            brute = brute.min(regular_objective(&s, &[th.cos(), th.sin(), 0.0]).sqrt());
        }
        assert!(brute >= 0.1, "half-space family got unexpectedly close: {}", brute);
        let fit = fit_regular(&s);
        assert!(fit.residual >= 0.1);
        assert_abs_diff_eq!(fit.residual, brute, epsilon = 1e-6);
    }

    #[test]
    fn singular_fit_recovers_exact_quadratics() {
        let s = sample_2d(|p| 0.5 * p[0] * p[0]);
        let fit = fit_singular(&s);
        assert!(fit.converged);
        assert!(fit.residual <= 1e-3);
        assert!(fit.matrix.sub(&diag2(1.0, 0.0)).frobenius() <= 1e-3);

        let s = sample_2d(|p| 0.25 * (p[0] * p[0] + p[1] * p[1]));
        let fit = fit_singular(&s);
        assert!(fit.residual <= 1e-6);
        assert!(fit.matrix.sub(&diag2(0.5, 0.5)).frobenius() <= 1e-6);
    }

    #[test]
    fn singular_fit_of_a_half_space_leaves_a_gap() {
        // the best quadratic explanation of a half-space profile; by the
        // x2 -> -x2 symmetry the optimum is diagonal, so a dense scan of
        // the diagonal family gives the true floor
        let s = sample_2d(|p| 0.5 * p[0].max(0.0).powi(2));
        let mut brute = f64::INFINITY;
        let n = 20_001;
        for i in 0..n {
            let a = i as f64 / (n - 1) as f64;
            let mut acc = 0.0;
            for j in 0..s.interior_len() {
                let x = &s.points()[j];
                let model = 0.5 * (a * x[0] * x[0] + (1.0 - a) * x[1] * x[1]);
                let d = s.values()[j] - model;
                acc += s.weights()[j] * d * d;
            }
            brute = brute.min(acc.sqrt());
        }
        let fit = fit_singular(&s);
        assert!(fit.converged);
        assert!(fit.residual > 0.01, "gap should be visible: {}", fit.residual);
        assert!(fit.residual <= brute + 1e-6);
        assert_abs_diff_eq!(fit.residual, brute, epsilon = 1e-4);
    }

    #[test]
    fn fits_handle_one_dimensional_samples() {
        let s = BlowupSample::from_fn(1, |p| 0.5 * p[0].max(0.0).powi(2), &[0.0; 3], 1.0, HHAT)
            .unwrap();
        let reg = fit_regular(&s);
        assert!(reg.residual <= 1e-12);
        assert_eq!(reg.direction[0], 1.0);
        let sing = fit_singular(&s);
        assert!(sing.residual > 0.05);
        assert_abs_diff_eq!(sing.matrix.get(0, 0), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn fitted_direction_follows_rotations() {
        for th in [0.3f64, 2.1, 4.0, 5.9] {
            let e = [th.cos(), th.sin(), 0.0];
            let s = sample_2d(|p| 0.5 * (e[0] * p[0] + e[1] * p[1]).max(0.0).powi(2));
            let fit = fit_regular(&s);
            assert!(
                angle_between(2, &fit.direction, &e) <= 1e-6,
                "direction off at angle {}",
                th
            );
            assert!(fit.residual <= 1e-9);
        }
    }

    #[test]
    fn fitted_matrix_follows_rotations() {
        let th: f64 = 0.7;
        let (c, s_) = (th.cos(), th.sin());
        // A = R diag(0.8, 0.2) R'
        let a00 = 0.8 * c * c + 0.2 * s_ * s_;
        let a11 = 0.8 * s_ * s_ + 0.2 * c * c;
        let a01 = (0.8 - 0.2) * c * s_;
        let s = sample_2d(|p| {
            0.5 * (a00 * p[0] * p[0] + 2.0 * a01 * p[0] * p[1] + a11 * p[1] * p[1])
        });
        let fit = fit_singular(&s);
        let mut expect = diag2(a00, a11);
        expect.set_sym(0, 1, a01);
        assert!(fit.matrix.sub(&expect).frobenius() <= 1e-8);
        assert!(fit.residual <= 1e-8);
    }

    #[test]
    fn three_dimensional_direction_fit_localizes() {
        let e = {
            let raw = [1.0f64, 2.0, -2.0];
            let n = (raw[0] * raw[0] + raw[1] * raw[1] + raw[2] * raw[2]).sqrt();
            [raw[0] / n, raw[1] / n, raw[2] / n]
        };
        let s = BlowupSample::from_fn(
            3,
            |p| 0.5 * (e[0] * p[0] + e[1] * p[1] + e[2] * p[2]).max(0.0).powi(2),
            &[0.0; 3],
            1.0,
            1.0 / 8.0,
        )
        .unwrap();
        let fit = fit_regular(&s);
        assert!(angle_between(3, &fit.direction, &e) <= 1e-5);
        assert!(fit.residual <= 1e-6);
    }

    #[test]
    fn projected_gradient_descends_monotonically() {
        for f in [
            (|p: &[f64; 3]| 0.5 * p[0].max(0.0).powi(2)) as fn(&[f64; 3]) -> f64,
            |p| 0.5 * p[0] * p[0] + 0.3 * p[0] * p[1],
            |p| (p[0] + 0.2 * p[1]).abs().powf(1.7),
        ] {
            let s = sample_2d(f);
            let mut trace = Vec::new();
            let _ = fit_singular_traced(&s, Some(&mut trace));
            assert!(trace.len() >= 2);
            for w in trace.windows(2) {
                assert!(
                    w[1] <= w[0] + 1e-14,
                    "objective increased from {} to {}",
                    w[0],
                    w[1]
                );
            }
        }
    }

    #[test]
    fn fitted_matrix_stays_in_the_constraint_set() {
        let s = sample_2d(|p| (p[0] - 0.3 * p[1]).max(0.0).powi(2));
        let fit = fit_singular(&s);
        let (vals, _) = fit.matrix.eigen();
        assert_abs_diff_eq!(fit.matrix.trace(), 1.0, epsilon = 1e-12);
        assert!(vals[..2].iter().all(|&l| l >= -1e-12));
    }
}
