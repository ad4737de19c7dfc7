//! Surface quadrature on spheres centered inside a grid box.
//!
//! Dimension 1 uses the two endpoint directions with unit weights, dimension
//! 2 equally spaced angles, dimension 3 a Fibonacci point set. All rules use
//! equal weights summing to the sphere measure, and the point layout is a
//! pure function of the requested size, so repeated calls agree bitwise.

use super::{point_f64, Grid};
use crate::error::Error;
use crate::scalar::Real;

/// Quadrature rule over the sphere of radius `r` around `center`:
/// `sum_j weights[j] * f(points[j])` approximates the surface integral.
#[derive(Debug, Clone)]
pub struct SphereRule<T> {
    pub center: [T; 3],
    pub radius: T,
    /// Unit directions from the center; `points[j] = center + radius * directions[j]`.
    pub directions: Vec<[T; 3]>,
    pub points: Vec<[T; 3]>,
    pub weights: Vec<T>,
}

impl<T: Real> SphereRule<T> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Direction count giving quadrature error below the interpolation error of
/// typical grids: the two endpoints in 1D, 256 on circles, 2048 on spheres.
pub fn default_direction_count(dim: usize) -> usize {
    match dim {
        1 => 2,
        2 => 256,
        _ => 2048,
    }
}

/// Unit directions used by the sphere rules. Dimension 1 always returns the
/// two endpoint directions; `m` is the point count in dimensions 2 and 3.
pub fn unit_sphere_directions<T: Real>(dim: usize, m: usize) -> Vec<[T; 3]> {
    match dim {
        1 => vec![
            [-T::one(), T::zero(), T::zero()],
            [T::one(), T::zero(), T::zero()],
        ],
        2 => {
            let two_pi = T::PI() * T::of(2.0);
            (0..m)
                .map(|j| {
                    let theta = two_pi * T::of_usize(j) / T::of_usize(m);
                    [theta.cos(), theta.sin(), T::zero()]
                })
                .collect()
        }
        3 => {
            // Fibonacci lattice: uniform mid-point heights, golden-angle turns.
            let golden = (T::of(5.0).sqrt() - T::one()) * T::of(0.5);
            let two_pi = T::PI() * T::of(2.0);
            (0..m)
                .map(|j| {
                    let z = T::one()
                        - (T::of(2.0) * T::of_usize(j) + T::one()) / T::of_usize(m);
                    let rho = (T::one() - z * z).max(T::zero()).sqrt();
                    let phi = two_pi * golden * T::of_usize(j);
                    [rho * phi.cos(), rho * phi.sin(), z]
                })
                .collect()
        }
        _ => panic!("unsupported dimension {}", dim),
    }
}

/// Builds the quadrature rule for the sphere of radius `r` about `center`,
/// requiring the sphere to lie inside the grid box so every point can be
/// interpolated. In dimensions 2 and 3 at least 16 points are required.
pub fn sphere_quadrature<T: Real>(
    grid: &Grid<T>,
    center: &[T; 3],
    r: T,
    m: usize,
) -> Result<SphereRule<T>, Error<T>> {
    let dim = grid.dim();
    if !(r > T::zero()) || !r.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "sphere radius must be positive and finite, got {}",
            r
        )));
    }
    if dim >= 2 && m < 16 {
        return Err(Error::InvalidParameter(format!(
            "sphere rules in dimension {} need at least 16 points, got {}",
            dim, m
        )));
    }
    if !grid.ball_inside(center, r) {
        return Err(Error::OutOfDomain(point_f64(center)));
    }
    let directions = unit_sphere_directions::<T>(dim, m);
    let count = directions.len();
    let measure = match dim {
        1 => T::of(2.0),
        2 => T::of(2.0) * T::PI() * r,
        _ => T::of(4.0) * T::PI() * r * r,
    };
    let w = measure / T::of_usize(count);
    let points = directions
        .iter()
        .map(|d| {
            let mut p = [T::zero(); 3];
            for k in 0..dim {
                p[k] = center[k] + r * d[k];
            }
            p
        })
        .collect();
    Ok(SphereRule {
        center: *center,
        radius: r,
        directions,
        points,
        weights: vec![w; count],
    })
}
