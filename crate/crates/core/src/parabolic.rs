//! Implicit time stepping for the parabolic obstacle problem and the
//! integral transform linking it to the one-phase melting problem.
//!
//! Each backward Euler step solves the complementarity system with operator
//! `I/tau - Lap_h` and linear term `1 - u_prev/tau`, so the constraint
//! u >= 0 and the complementarity structure hold exactly at every time
//! level. Because the step operator has nonpositive off-diagonal entries,
//! monotone boundary data forces u to be nondecreasing in time, which is
//! what makes the temperature transform below meaningful.

use crate::elliptic::{solve_psor_from, LcpProblem, SolveStats};
use crate::error::Error;
use crate::grid::{Grid, ScalarField};
use crate::scalar::Real;

/// Time levels of a single run: `fields[k]` lives at `times[k]`; `stats[k]`
/// describes the solve that produced level k (the initial level has none).
#[derive(Debug, Clone)]
pub struct Trajectory<T> {
    times: Vec<T>,
    fields: Vec<ScalarField<T>>,
    stats: Vec<Option<SolveStats<T>>>,
}

impl<T: Real> Trajectory<T> {
    /// Builds a trajectory from matching time and field lists. Times must
    /// increase strictly and all fields must share one grid.
    pub fn new(times: Vec<T>, fields: Vec<ScalarField<T>>) -> Result<Self, Error<T>> {
        if times.len() != fields.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} times for {} fields",
                times.len(),
                fields.len()
            )));
        }
        if times.is_empty() {
            return Err(Error::TooFewTimes { need: 1, got: 0 });
        }
        for w in times.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidParameter(format!(
                    "times must increase strictly, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        for f in &fields[1..] {
            if f.grid() != fields[0].grid() {
                return Err(Error::ShapeMismatch(
                    "all fields of a trajectory must share one grid".into(),
                ));
            }
        }
        let stats = vec![None; times.len()];
        Ok(Trajectory { times, fields, stats })
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn fields(&self) -> &[ScalarField<T>] {
        &self.fields
    }

    pub fn stats(&self) -> &[Option<SolveStats<T>>] {
        &self.stats
    }

    pub fn grid(&self) -> &Grid<T> {
        self.fields[0].grid()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Largest nodewise decrease between consecutive levels (0 for a
    /// perfectly monotone trajectory).
    pub fn worst_time_decrease(&self) -> T {
        let mut worst = T::zero();
        for w in self.fields.windows(2) {
            for (&a, &b) in w[0].values().iter().zip(w[1].values()) {
                worst = worst.max(a - b);
            }
        }
        worst
    }
}

/// Evaluates `f(t, x)` on the boundary nodes of a zeroed field.
fn boundary_field<T: Real>(
    grid: Grid<T>,
    t: T,
    f: &impl Fn(T, &[T; 3]) -> T,
) -> ScalarField<T> {
    let mut out = ScalarField::zeros(grid);
    for idx in 0..grid.node_count() {
        let m = grid.multi(idx);
        if grid.is_boundary(m) {
            out.values_mut()[idx] = f(t, &grid.coord(m));
        }
    }
    out
}

/// One backward Euler step of `du/dt = Lap u - 1` under `u >= 0`: solves
/// the complementarity system with operator `I/tau - Lap_h` and linear term
/// `1 - u_prev/tau`. `boundary_next` is a full field whose boundary slots
/// carry the Dirichlet data of the new level; they may not fall below the
/// boundary values of `u_prev`.
pub fn step_implicit<T: Real>(
    u_prev: &ScalarField<T>,
    tau: T,
    boundary_next: &ScalarField<T>,
    omega: T,
    tol: T,
    max_iter: usize,
) -> Result<(ScalarField<T>, SolveStats<T>), Error<T>> {
    if !(tau > T::zero()) || !tau.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "time step must be positive and finite, got {}",
            tau
        )));
    }
    let grid = *u_prev.grid();
    if boundary_next.grid() != &grid {
        return Err(Error::ShapeMismatch(
            "boundary field must live on the trajectory grid".into(),
        ));
    }
    if u_prev.min_value() < T::zero() {
        return Err(Error::ConstraintViolation(format!(
            "previous level dips to {}, but levels must be nonnegative",
            u_prev.min_value()
        )));
    }
    let slack = T::of(1e-10);
    let inv_tau = T::one() / tau;
    let mut linear = Vec::with_capacity(grid.node_count());
    for idx in 0..grid.node_count() {
        let m = grid.multi(idx);
        if grid.is_boundary(m) {
            if boundary_next.values()[idx] < u_prev.values()[idx] - slack {
                return Err(Error::NonMonotoneSchedule(format!(
                    "boundary value at node {:?} drops from {} to {}",
                    m,
                    u_prev.values()[idx],
                    boundary_next.values()[idx]
                )));
            }
            linear.push(T::zero());
        } else {
            linear.push(T::one() - u_prev.values()[idx] * inv_tau);
        }
    }
    let problem = LcpProblem::new(grid, inv_tau, linear, boundary_next.values().to_vec())?;
    // warm start from the previous level; diffusion moves u only a little
    solve_psor_from(&problem, u_prev, omega, tol, max_iter)
}

/// Runs backward Euler from `initial` to time `t_end` with uniform step
/// `tau`. The boundary schedule is sampled at each level's time and must be
/// nondecreasing in t on every boundary node.
pub fn solve_parabolic<T: Real>(
    grid: Grid<T>,
    initial: &ScalarField<T>,
    boundary_schedule: impl Fn(T, &[T; 3]) -> T,
    tau: T,
    t_end: T,
    omega: T,
    tol: T,
    max_iter: usize,
) -> Result<Trajectory<T>, Error<T>> {
    if initial.grid() != &grid {
        return Err(Error::ShapeMismatch(
            "initial field must live on the run grid".into(),
        ));
    }
    if initial.min_value() < T::zero() {
        return Err(Error::ConstraintViolation(format!(
            "initial field dips to {}",
            initial.min_value()
        )));
    }
    if !(tau > T::zero()) || !(t_end > T::zero()) {
        return Err(Error::InvalidParameter(format!(
            "need positive tau and horizon, got tau = {}, T = {}",
            tau, t_end
        )));
    }
    let steps = (t_end / tau).round().as_f64() as usize;
    if steps == 0 {
        return Err(Error::InvalidParameter(format!(
            "horizon {} is shorter than one step {}",
            t_end, tau
        )));
    }

    let mut times = Vec::with_capacity(steps + 1);
    let mut fields = Vec::with_capacity(steps + 1);
    let mut stats: Vec<Option<SolveStats<T>>> = Vec::with_capacity(steps + 1);
    times.push(T::zero());
    fields.push(initial.clone());
    stats.push(None);

    for k in 1..=steps {
        let t = tau * T::of_usize(k);
        let boundary_next = boundary_field(grid, t, &boundary_schedule);
        let (u, s) = step_implicit(
            fields.last().expect("at least the initial level"),
            tau,
            &boundary_next,
            omega,
            tol,
            max_iter,
        )?;
        times.push(t);
        fields.push(u);
        stats.push(Some(s));
    }

    Ok(Trajectory { times, fields, stats })
}

/// Cumulative trapezoidal time integral of a nonnegative temperature
/// trajectory: the first level of the result is zero and levels increase.
pub fn duvaut_forward<T: Real>(theta: &Trajectory<T>) -> Result<Trajectory<T>, Error<T>> {
    for (k, f) in theta.fields.iter().enumerate() {
        if f.min_value() < T::zero() {
            return Err(Error::ConstraintViolation(format!(
                "temperature at level {} dips to {}",
                k,
                f.min_value()
            )));
        }
    }
    let grid = *theta.grid();
    let n = grid.node_count();
    let mut fields = Vec::with_capacity(theta.len());
    fields.push(ScalarField::zeros(grid));
    for k in 1..theta.len() {
        let dt = theta.times[k] - theta.times[k - 1];
        let half_dt = dt * T::of(0.5);
        let mut vals = fields[k - 1].values().to_vec();
        for i in 0..n {
            vals[i] += half_dt * (theta.fields[k - 1].values()[i] + theta.fields[k].values()[i]);
        }
        fields.push(ScalarField::from_values(grid, vals)?);
    }
    let stats = vec![None; theta.len()];
    Ok(Trajectory { times: theta.times.clone(), fields, stats })
}

/// Time derivative of a nondecreasing trajectory: centered differences at
/// interior times, one-sided at the two ends. Inverse of [`duvaut_forward`]
/// up to second order in the step.
pub fn temperature_from_u<T: Real>(u: &Trajectory<T>) -> Result<Trajectory<T>, Error<T>> {
    if u.len() < 2 {
        return Err(Error::TooFewTimes { need: 2, got: u.len() });
    }
    let grid = *u.grid();
    let n = grid.node_count();
    let last = u.len() - 1;
    let mut fields = Vec::with_capacity(u.len());
    for k in 0..u.len() {
        let (lo, hi) = if k == 0 {
            (0, 1)
        } else if k == last {
            (last - 1, last)
        } else {
            (k - 1, k + 1)
        };
        let inv_dt = T::one() / (u.times[hi] - u.times[lo]);
        let mut vals = Vec::with_capacity(n);
        for i in 0..n {
            vals.push((u.fields[hi].values()[i] - u.fields[lo].values()[i]) * inv_dt);
        }
        fields.push(ScalarField::from_values(grid, vals)?);
    }
    let stats = vec![None; u.len()];
    Ok(Trajectory { times: u.times.clone(), fields, stats })
}
