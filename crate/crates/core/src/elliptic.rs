//! The discrete obstacle problem as a linear complementarity system and its
//! projected SOR solver.
//!
//! On interior nodes the problem asks for u with
//!
//! ```text
//! u_i >= 0,   w_i >= 0,   u_i w_i = 0,
//! w_i = sigma u_i - (Lap_h u)_i + q_i,
//! ```
//!
//! with Dirichlet values pinned on boundary nodes. The elliptic obstacle
//! problem uses sigma = 0 and q = g; the implicit parabolic step reuses the
//! same structure with sigma = 1/tau and q = 1 - u_prev/tau. The operator is
//! symmetric positive definite after boundary elimination, so the sweep
//! converges for any relaxation factor in (0, 2) and the solution is unique.

use serde_json::json;

use crate::error::Error;
use crate::grid::{Grid, ScalarField};
use crate::scalar::Real;

/// Iteration summary of a projected SOR run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveStats<T> {
    /// Number of full sweeps performed.
    pub iterations: usize,
    pub final_residual: T,
    pub omega: T,
}

impl<T: Real> SolveStats<T> {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "iterations": self.iterations,
            "final_residual": self.final_residual.as_f64(),
            "omega": self.omega.as_f64(),
        })
    }
}

/// Linear complementarity problem on a grid: operator
/// `sigma I - Lap_h` on interior nodes, fixed values on boundary nodes.
#[derive(Debug, Clone)]
pub struct LcpProblem<T> {
    grid: Grid<T>,
    diag_shift: T,
    /// q, read on interior slots only.
    linear_term: Vec<T>,
    /// Dirichlet data, read on boundary slots only.
    boundary_values: Vec<T>,
    /// Interior linear indices in lexicographic order.
    interior: Vec<usize>,
}

impl<T: Real> LcpProblem<T> {
    /// Raw constructor. `linear_term` and `boundary_values` are full-length
    /// node vectors; boundary data must be nonnegative since the solution is.
    pub fn new(
        grid: Grid<T>,
        diag_shift: T,
        linear_term: Vec<T>,
        boundary_values: Vec<T>,
    ) -> Result<Self, Error<T>> {
        let n = grid.node_count();
        if linear_term.len() != n || boundary_values.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "problem vectors need {} entries, got {} and {}",
                n,
                linear_term.len(),
                boundary_values.len()
            )));
        }
        if !(diag_shift >= T::zero()) || !diag_shift.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "diagonal shift must be nonnegative and finite, got {}",
                diag_shift
            )));
        }
        let mut interior = Vec::new();
        for idx in 0..n {
            let m = grid.multi(idx);
            if grid.is_boundary(m) {
                if boundary_values[idx] < T::zero() {
                    return Err(Error::ConstraintViolation(format!(
                        "boundary value {} at node {:?} is negative",
                        boundary_values[idx], m
                    )));
                }
            } else {
                interior.push(idx);
            }
        }
        Ok(LcpProblem { grid, diag_shift, linear_term, boundary_values, interior })
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn diag_shift(&self) -> T {
        self.diag_shift
    }

    pub fn linear_term(&self) -> &[T] {
        &self.linear_term
    }

    pub fn boundary_values(&self) -> &[T] {
        &self.boundary_values
    }

    /// Field holding the Dirichlet data on boundary nodes and zero inside:
    /// the cold-start iterate.
    pub fn boundary_state(&self) -> ScalarField<T> {
        let mut u = ScalarField::zeros(self.grid);
        for idx in 0..self.grid.node_count() {
            if self.grid.is_boundary(self.grid.multi(idx)) {
                u.values_mut()[idx] = self.boundary_values[idx];
            }
        }
        u
    }

    /// The complementarity function w = sigma u - Lap_h u + q on interior
    /// nodes; boundary slots of the result are zero.
    pub fn operator_apply(&self, u: &ScalarField<T>) -> Result<ScalarField<T>, Error<T>> {
        self.check_shape(u)?;
        let g = self.grid;
        let s = g.strides();
        let inv_h2 = T::one() / (g.h() * g.h());
        let two_d = T::of_usize(2 * g.dim());
        let vals = u.values();
        let mut out = ScalarField::zeros(g);
        for &idx in &self.interior {
            let mut nb = T::zero();
            for k in 0..g.dim() {
                nb = nb + vals[idx - s[k]] + vals[idx + s[k]];
            }
            out.values_mut()[idx] = (self.diag_shift + two_d * inv_h2) * vals[idx]
                - nb * inv_h2
                + self.linear_term[idx];
        }
        Ok(out)
    }

    fn check_shape(&self, u: &ScalarField<T>) -> Result<(), Error<T>> {
        if u.grid() != &self.grid {
            return Err(Error::ShapeMismatch(
                "field grid differs from the problem grid".into(),
            ));
        }
        Ok(())
    }
}

/// Assembles the elliptic obstacle problem `u >= 0`, `-Lap_h u + g >= 0`,
/// complementary, with Dirichlet data from `boundary`. The right-hand side
/// must be strictly positive and the boundary data nonnegative.
pub fn assemble_lcp<T: Real>(
    grid: Grid<T>,
    g: &ScalarField<T>,
    boundary: &ScalarField<T>,
) -> Result<LcpProblem<T>, Error<T>> {
    if g.grid() != &grid || boundary.grid() != &grid {
        return Err(Error::ShapeMismatch(
            "right-hand side and boundary fields must live on the problem grid".into(),
        ));
    }
    for idx in 0..grid.node_count() {
        let m = grid.multi(idx);
        if !grid.is_boundary(m) && !(g.values()[idx] > T::zero()) {
            return Err(Error::ConstraintViolation(format!(
                "right-hand side must be strictly positive, found {} at node {:?}",
                g.values()[idx],
                m
            )));
        }
    }
    LcpProblem::new(grid, T::zero(), g.values().to_vec(), boundary.values().to_vec())
}

/// Residual of the discrete complementarity conditions: the largest interior
/// violation |min(u_i, w_i)|, plus the magnitude of the most negative node
/// value, plus the largest boundary mismatch. Zero exactly on discrete
/// solutions.
pub fn complementarity_residual<T: Real>(
    problem: &LcpProblem<T>,
    field: &ScalarField<T>,
) -> Result<T, Error<T>> {
    problem.check_shape(field)?;
    let w = problem.operator_apply(field)?;
    let vals = field.values();
    let mut worst = T::zero();
    let mut most_negative = T::zero();
    for &idx in &problem.interior {
        worst = worst.max(vals[idx].min(w.values()[idx]).abs());
        most_negative = most_negative.min(vals[idx]);
    }
    let g = problem.grid;
    let mut boundary_mismatch = T::zero();
    for idx in 0..g.node_count() {
        if g.is_boundary(g.multi(idx)) {
            boundary_mismatch =
                boundary_mismatch.max((vals[idx] - problem.boundary_values[idx]).abs());
            most_negative = most_negative.min(vals[idx]);
        }
    }
    Ok(worst + most_negative.abs() + boundary_mismatch)
}

/// Projected SOR from the cold start (zero interior, Dirichlet boundary).
pub fn solve_psor<T: Real>(
    problem: &LcpProblem<T>,
    omega: T,
    tol: T,
    max_iter: usize,
) -> Result<(ScalarField<T>, SolveStats<T>), Error<T>> {
    let init = problem.boundary_state();
    solve_psor_from(problem, &init, omega, tol, max_iter)
}

/// Projected SOR from a caller-supplied iterate (warm start). The iterate is
/// clamped to the constraint and its boundary slots are overwritten with the
/// problem's Dirichlet data before sweeping.
pub fn solve_psor_from<T: Real>(
    problem: &LcpProblem<T>,
    init: &ScalarField<T>,
    omega: T,
    tol: T,
    max_iter: usize,
) -> Result<(ScalarField<T>, SolveStats<T>), Error<T>> {
    if !(omega > T::zero() && omega < T::of(2.0)) {
        return Err(Error::InvalidParameter(format!(
            "relaxation factor must lie in (0, 2), got {}",
            omega
        )));
    }
    if !(tol > T::zero()) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {}",
            tol
        )));
    }
    if max_iter == 0 {
        return Err(Error::InvalidParameter("iteration budget is zero".into()));
    }
    problem.check_shape(init)?;

    let g = problem.grid;
    let s = g.strides();
    let inv_h2 = T::one() / (g.h() * g.h());
    let diag = problem.diag_shift + T::of_usize(2 * g.dim()) * inv_h2;
    let inv_diag = T::one() / diag;
    let one_minus_omega = T::one() - omega;

    let mut u = init.clone();
    for idx in 0..g.node_count() {
        if g.is_boundary(g.multi(idx)) {
            u.values_mut()[idx] = problem.boundary_values[idx];
        } else {
            u.values_mut()[idx] = u.values()[idx].max(T::zero());
        }
    }

    let q = &problem.linear_term;
    let mut residual = T::infinity();
    for sweep in 1..=max_iter {
        {
            let vals = u.values_mut();
            match g.dim() {
                1 => {
                    for &idx in &problem.interior {
                        let nb = vals[idx - 1] + vals[idx + 1];
                        let gs = (nb * inv_h2 - q[idx]) * inv_diag;
                        vals[idx] = (one_minus_omega * vals[idx] + omega * gs).max(T::zero());
                    }
                }
                2 => {
                    let s0 = s[0];
                    for &idx in &problem.interior {
                        let nb = vals[idx - s0] + vals[idx + s0] + vals[idx - 1] + vals[idx + 1];
                        let gs = (nb * inv_h2 - q[idx]) * inv_diag;
                        vals[idx] = (one_minus_omega * vals[idx] + omega * gs).max(T::zero());
                    }
                }
                _ => {
                    let (s0, s1) = (s[0], s[1]);
                    for &idx in &problem.interior {
                        let nb = vals[idx - s0]
                            + vals[idx + s0]
                            + vals[idx - s1]
                            + vals[idx + s1]
                            + vals[idx - 1]
                            + vals[idx + 1];
                        let gs = (nb * inv_h2 - q[idx]) * inv_diag;
                        vals[idx] = (one_minus_omega * vals[idx] + omega * gs).max(T::zero());
                    }
                }
            }
        }

        // Interior natural residual. The sweep keeps u >= 0 and the boundary
        // pinned, so the other two terms of the public residual are zero.
        let vals = u.values();
        let mut worst = T::zero();
        for &idx in &problem.interior {
            let mut nb = T::zero();
            for k in 0..g.dim() {
                nb = nb + vals[idx - s[k]] + vals[idx + s[k]];
            }
            let w = diag * vals[idx] - nb * inv_h2 + q[idx];
            worst = worst.max(vals[idx].min(w).abs());
        }
        residual = worst;
        if residual <= tol {
            let stats = SolveStats { iterations: sweep, final_residual: residual, omega };
            return Ok((u, stats));
        }
    }

    let stats = SolveStats { iterations: max_iter, final_residual: residual, omega };
    Err(Error::NonConvergence { field: Box::new(u), stats })
}
