//! Two orchestrated studies built from the solver and classifier: a sweep
//! of the boundary-data family (f + t)_+ that watches how singular points
//! appear and vanish as the data shifts, and a per-time-level scan of a
//! parabolic trajectory that reports when singular free-boundary points
//! exist.
//!
//! Both studies classify every extracted free-boundary point. Bulk
//! classification uses a coarser unit-ball lattice (spacing 1/8, the
//! allowed maximum) than single-point calls: the dichotomy margins are two
//! orders above the extra sampling error, and sweeps visit thousands of
//! points.

use rayon::prelude::*;

use crate::blowup::{classify_point_with_spacing, ClassificationReport, Thresholds, Verdict};
use crate::elliptic::{assemble_lcp, solve_psor, solve_psor_from, SolveStats};
use crate::error::Error;
use crate::freeboundary::{contact_set, refine_center};
use crate::grid::{Grid, ScalarField};
use crate::parabolic::Trajectory;
use crate::scalar::Real;

const BULK_SAMPLE_SPACING: f64 = 1.0 / 8.0;

/// Verdict tallies for the free-boundary points of one solved field.
#[derive(Debug, Clone, PartialEq)]
pub struct VerdictCounts<T> {
    pub fb_count: usize,
    pub regular: usize,
    pub singular: usize,
    pub undetermined: usize,
    /// Points the classifier rejected (ball outside the domain, too few
    /// admissible radii, or value above the contact threshold).
    pub unclassified: usize,
    pub singular_points: Vec<[T; 3]>,
}

impl<T> Default for VerdictCounts<T> {
    fn default() -> Self {
        VerdictCounts {
            fb_count: 0,
            regular: 0,
            singular: 0,
            undetermined: 0,
            unclassified: 0,
            singular_points: Vec::new(),
        }
    }
}

fn classify_field<T: Real>(
    field: &ScalarField<T>,
    radii: &[T],
    thresholds: &Thresholds<T>,
) -> Result<VerdictCounts<T>, Error<T>> {
    let geo = contact_set(field, thresholds.delta)?;
    let mut counts = VerdictCounts {
        fb_count: geo.fb_points.len(),
        ..VerdictCounts::default()
    };
    let hhat = T::of(BULK_SAMPLE_SPACING);
    for p in &geo.fb_points {
        // Thresholded crossings sit about sqrt(2 delta) off the contact set;
        // polish the center first or the offset dominates the profile fits.
        let center = refine_center(field, p, 12);
        match classify_point_with_spacing(field, &center, radii, thresholds, hhat) {
            Ok(report) => match report.verdict {
                Verdict::Regular => counts.regular += 1,
                Verdict::Singular => {
                    counts.singular += 1;
                    counts.singular_points.push(center);
                }
                Verdict::Undetermined => counts.undetermined += 1,
            },
            Err(Error::Resolution(_))
            | Err(Error::OutOfDomain(_))
            | Err(Error::NotFreeBoundary { .. }) => counts.unclassified += 1,
            Err(other) => return Err(other),
        }
    }
    Ok(counts)
}

/// One shift value of the boundary-data sweep.
#[derive(Debug, Clone)]
pub struct SweepRecord<T> {
    pub t: T,
    /// Solver statistics; present even when the solve hit the iteration cap.
    pub stats: Option<SolveStats<T>>,
    pub converged: bool,
    pub counts: VerdictCounts<T>,
}

/// Outcome of a boundary-data sweep over increasing shifts.
#[derive(Debug, Clone)]
pub struct SweepResult<T> {
    pub grid: Grid<T>,
    /// One record per shift, in increasing t.
    pub records: Vec<SweepRecord<T>>,
    /// Largest nodewise decrease u_t - u_t' over consecutive converged
    /// shifts t < t'; the solutions should be nondecreasing in t.
    pub worst_monotonicity_violation: T,
    /// Nodes masked at a larger shift but not at a smaller one, summed over
    /// consecutive converged pairs; contact sets should be nested.
    pub mask_nesting_violations: usize,
}

impl<T: Real> SweepResult<T> {
    pub fn flagged_shifts(&self) -> Vec<T> {
        self.records
            .iter()
            .filter(|r| r.counts.singular > 0)
            .map(|r| r.t)
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let records: Vec<serde_json::Value> = self
            .records
            .iter()
            .map(|r| {
                let pts: Vec<Vec<f64>> = r
                    .counts
                    .singular_points
                    .iter()
                    .map(|p| p[..self.grid.dim()].iter().map(|v| v.as_f64()).collect())
                    .collect();
                serde_json::json!({
                    "t": r.t.as_f64(),
                    "converged": r.converged,
                    "stats": r.stats.as_ref().map(|s| s.to_json()),
                    "fb_count": r.counts.fb_count,
                    "regular": r.counts.regular,
                    "singular": r.counts.singular,
                    "undetermined": r.counts.undetermined,
                    "unclassified": r.counts.unclassified,
                    "singular_points": pts,
                })
            })
            .collect();
        serde_json::json!({
            "grid": self.grid.to_json(),
            "records": records,
            "worst_monotonicity_violation": self.worst_monotonicity_violation.as_f64(),
            "mask_nesting_violations": self.mask_nesting_violations,
        })
    }
}

/// Solver and classifier settings for a sweep.
#[derive(Debug, Clone)]
pub struct SweepParams<T> {
    pub radii: Vec<T>,
    pub thresholds: Thresholds<T>,
    pub omega: T,
    pub tol: T,
    pub max_iter: usize,
    /// Chain solves sequentially, seeding each shift with the previous
    /// solution. When false the shifts solve cold, in parallel.
    pub warm_start: bool,
}

/// Sweeps the boundary-data family (f + t)_+ across `t_count` equally
/// spaced shifts, solving the obstacle problem at each one and classifying
/// every free-boundary point. A solve that hits the iteration cap flags
/// its record and the sweep continues.
pub fn schaeffer_sweep<T: Real>(
    grid: Grid<T>,
    base: &ScalarField<T>,
    t_range: (T, T),
    t_count: usize,
    params: &SweepParams<T>,
) -> Result<SweepResult<T>, Error<T>> {
    if t_count == 0 {
        return Err(Error::InvalidParameter("sweep needs at least one shift".into()));
    }
    if !(t_range.1 >= t_range.0) {
        return Err(Error::InvalidParameter(format!(
            "shift range [{}, {}] is not increasing",
            t_range.0, t_range.1
        )));
    }
    let shifts: Vec<T> = if t_count == 1 {
        vec![t_range.0]
    } else {
        (0..t_count)
            .map(|k| {
                t_range.0
                    + (t_range.1 - t_range.0) * T::of_usize(k) / T::of_usize(t_count - 1)
            })
            .collect()
    };
    let ones = ScalarField::from_fn(grid, |_| T::one());

    // (field, stats, converged) per shift; the field is kept only for the
    // cross-shift monotonicity checks below
    let solve_shift = |t: T, seed: Option<&ScalarField<T>>| {
        let data = ScalarField::from_fn(grid, |p| {
            (base.interpolate(p).expect("base field covers its own grid") + t).max(T::zero())
        });
        let problem = assemble_lcp(grid, &ones, &data)?;
        let outcome = match seed {
            Some(u0) => solve_psor_from(&problem, u0, params.omega, params.tol, params.max_iter),
            None => solve_psor(&problem, params.omega, params.tol, params.max_iter),
        };
        match outcome {
            Ok((u, stats)) => Ok((u, stats, true)),
            Err(Error::NonConvergence { field, stats }) => Ok((*field, stats, false)),
            Err(other) => Err(other),
        }
    };

    let solves: Vec<(ScalarField<T>, SolveStats<T>, bool)> = if params.warm_start {
        let mut acc = Vec::with_capacity(shifts.len());
        let mut seed: Option<ScalarField<T>> = None;
        for &t in &shifts {
            let out = solve_shift(t, seed.as_ref())?;
            seed = Some(out.0.clone());
            acc.push(out);
        }
        acc
    } else {
        shifts
            .par_iter()
            .map(|&t| solve_shift(t, None))
            .collect::<Result<Vec<_>, _>>()?
    };

    let mut records = Vec::with_capacity(shifts.len());
    for (&t, (u, stats, converged)) in shifts.iter().zip(&solves) {
        let counts = if *converged {
            classify_field(u, &params.radii, &params.thresholds)?
        } else {
            VerdictCounts::default()
        };
        records.push(SweepRecord {
            t,
            stats: Some(stats.clone()),
            converged: *converged,
            counts,
        });
    }

    let mut worst = T::zero();
    let mut nesting = 0usize;
    for pair in solves.windows(2) {
        let (ua, _, ca) = &pair[0];
        let (ub, _, cb) = &pair[1];
        if !(*ca && *cb) {
            continue;
        }
        for (&a, &b) in ua.values().iter().zip(ub.values()) {
            worst = worst.max(a - b);
        }
        let ga = contact_set(ua, params.thresholds.delta)?;
        let gb = contact_set(ub, params.thresholds.delta)?;
        nesting += ga
            .zero_mask
            .iter()
            .zip(&gb.zero_mask)
            .filter(|&(&ma, &mb)| mb && !ma)
            .count();
    }

    Ok(SweepResult {
        grid,
        records,
        worst_monotonicity_violation: worst,
        mask_nesting_violations: nesting,
    })
}

/// Verdict tallies for one time level of a trajectory.
#[derive(Debug, Clone)]
pub struct TimeRecord<T> {
    pub t: T,
    pub counts: VerdictCounts<T>,
}

/// Per-level singularity scan of a parabolic trajectory.
#[derive(Debug, Clone)]
pub struct SingularTimesReport<T> {
    pub records: Vec<TimeRecord<T>>,
    /// Times with at least one Singular verdict; a subset of the
    /// trajectory's times.
    pub flagged_times: Vec<T>,
    /// Maximal runs of consecutive flagged levels, as (start, end) times.
    pub intervals: Vec<(T, T)>,
    pub flagged_fraction: T,
    /// Times where some point could not be classified (resolution or
    /// domain limits); reported separately, may overlap flagged times.
    pub undetermined_times: Vec<T>,
}

impl<T: Real> SingularTimesReport<T> {
    pub fn to_json(&self) -> serde_json::Value {
        let records: Vec<serde_json::Value> = self
            .records
            .iter()
            .map(|r| {
                serde_json::json!({
                    "t": r.t.as_f64(),
                    "fb_count": r.counts.fb_count,
                    "regular": r.counts.regular,
                    "singular": r.counts.singular,
                    "undetermined": r.counts.undetermined,
                    "unclassified": r.counts.unclassified,
                })
            })
            .collect();
        serde_json::json!({
            "records": records,
            "flagged_times": self.flagged_times.iter().map(|t| t.as_f64()).collect::<Vec<_>>(),
            "intervals": self
                .intervals
                .iter()
                .map(|(a, b)| vec![a.as_f64(), b.as_f64()])
                .collect::<Vec<_>>(),
            "flagged_fraction": self.flagged_fraction.as_f64(),
            "undetermined_times": self
                .undetermined_times
                .iter()
                .map(|t| t.as_f64())
                .collect::<Vec<_>>(),
        })
    }
}

/// Classifies every free-boundary point at every time level and reports
/// the levels where singular points exist, with their interval structure.
pub fn singular_times<T: Real>(
    traj: &Trajectory<T>,
    radii: &[T],
    thresholds: &Thresholds<T>,
) -> Result<SingularTimesReport<T>, Error<T>> {
    if traj.worst_time_decrease() > T::of(1e-6) {
        return Err(Error::NonMonotoneSchedule(format!(
            "trajectory decreases by {} somewhere; the scan expects a melting run",
            traj.worst_time_decrease().as_f64()
        )));
    }
    let mut records = Vec::with_capacity(traj.len());
    let mut flagged_times = Vec::new();
    let mut undetermined_times = Vec::new();
    let mut intervals: Vec<(T, T)> = Vec::new();
    let mut run_open = false;
    for (k, field) in traj.fields().iter().enumerate() {
        let t = traj.times()[k];
        let counts = classify_field(field, radii, thresholds)?;
        let flagged = counts.singular > 0;
        if counts.unclassified > 0 {
            undetermined_times.push(t);
        }
        if flagged {
            flagged_times.push(t);
            if run_open {
                intervals.last_mut().expect("open run exists").1 = t;
            } else {
                intervals.push((t, t));
                run_open = true;
            }
        } else {
            run_open = false;
        }
        records.push(TimeRecord { t, counts });
    }
    let flagged_fraction = T::of_usize(flagged_times.len()) / T::of_usize(records.len());
    Ok(SingularTimesReport {
        records,
        flagged_times,
        intervals,
        flagged_fraction,
        undetermined_times,
    })
}

/// Classifies one point the way the sweeps do: polish the center onto the
/// zero set, then fit profiles at the sweep-grade sample spacing. Exposed so
/// studies and tests can drill into individual sweep verdicts.
pub fn classify_point_bulk<T: Real>(
    field: &ScalarField<T>,
    x0: &[T; 3],
    radii: &[T],
    thresholds: &Thresholds<T>,
) -> Result<ClassificationReport<T>, Error<T>> {
    let center = refine_center(field, x0, 12);
    classify_point_with_spacing(field, &center, radii, thresholds, T::of(BULK_SAMPLE_SPACING))
}
