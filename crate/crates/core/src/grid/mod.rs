//! Uniform node-centered grids on axis-aligned boxes, scalar fields living
//! on them, multilinear interpolation and the standard discrete Laplacian.
//!
//! Points and directions are passed as `[T; 3]` regardless of dimension;
//! axes at or beyond the active dimension are zero. Node data is stored
//! row-major with the last active axis fastest.

use crate::error::Error;
use crate::scalar::Real;

pub mod quadrature;
pub mod snapshot;

pub use quadrature::{sphere_quadrature, unit_sphere_directions, SphereRule};
pub use snapshot::{read_snapshot, write_snapshot};

/// Converts a zero-padded point to `f64` components for error payloads.
pub fn point_f64<T: Real>(p: &[T; 3]) -> [f64; 3] {
    [p[0].as_f64(), p[1].as_f64(), p[2].as_f64()]
}

/// Uniform grid with spacing `h` on a box `[origin, origin + h * (n_k - 1)]`
/// per axis. At least three nodes per active axis, so every grid has an
/// interior.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid<T> {
    dim: usize,
    extent: [usize; 3],
    h: T,
    origin: [T; 3],
}

impl<T: Real> Grid<T> {
    pub fn new(dim: usize, extent: [usize; 3], h: T, origin: [T; 3]) -> Result<Self, Error<T>> {
        if dim == 0 || dim > 3 {
            return Err(Error::BadDimension(dim));
        }
        if !(h > T::zero()) || !h.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "grid spacing must be positive and finite, got {}",
                h
            )));
        }
        let mut ext = [1usize; 3];
        let mut org = [T::zero(); 3];
        for k in 0..dim {
            if extent[k] < 3 {
                return Err(Error::GridTooSmall { need: 3, got: extent[k] });
            }
            ext[k] = extent[k];
            org[k] = origin[k];
        }
        Ok(Grid { dim, extent: ext, h, origin: org })
    }

    /// Builds the grid covering `[lo, hi]` with spacing `h`. Each side
    /// length must be an integer multiple of `h` up to rounding slack.
    pub fn from_box(dim: usize, lo: [T; 3], hi: [T; 3], h: T) -> Result<Self, Error<T>> {
        if dim == 0 || dim > 3 {
            return Err(Error::BadDimension(dim));
        }
        if !(h > T::zero()) || !h.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "grid spacing must be positive and finite, got {}",
                h
            )));
        }
        let mut extent = [1usize; 3];
        for k in 0..dim {
            let len = hi[k] - lo[k];
            if !(len > T::zero()) {
                return Err(Error::InvalidParameter(format!(
                    "box side {} is empty: lo {} >= hi {}",
                    k + 1,
                    lo[k],
                    hi[k]
                )));
            }
            let steps = len / h;
            let rounded = steps.round();
            if (steps - rounded).abs() > T::of(1e-9) * steps.max(T::one()) {
                return Err(Error::InvalidParameter(format!(
                    "spacing {} does not tile side {} of length {}",
                    h,
                    k + 1,
                    len
                )));
            }
            extent[k] = rounded.as_f64() as usize + 1;
        }
        Self::new(dim, extent, h, lo)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn h(&self) -> T {
        self.h
    }

    pub fn extent(&self) -> [usize; 3] {
        self.extent
    }

    pub fn origin(&self) -> [T; 3] {
        self.origin
    }

    /// Upper box corner, componentwise `origin + h * (n_k - 1)`.
    pub fn upper(&self) -> [T; 3] {
        let mut hi = [T::zero(); 3];
        for k in 0..self.dim {
            hi[k] = self.origin[k] + self.h * T::of_usize(self.extent[k] - 1);
        }
        hi
    }

    pub fn node_count(&self) -> usize {
        self.extent[..self.dim].iter().product()
    }

    /// Row-major strides, last active axis fastest. Inactive axes get 0.
    pub fn strides(&self) -> [usize; 3] {
        let mut s = [0usize; 3];
        let mut acc = 1usize;
        for k in (0..self.dim).rev() {
            s[k] = acc;
            acc *= self.extent[k];
        }
        s
    }

    pub fn linear(&self, multi: [usize; 3]) -> usize {
        let s = self.strides();
        let mut idx = 0;
        for k in 0..self.dim {
            debug_assert!(multi[k] < self.extent[k]);
            idx += multi[k] * s[k];
        }
        idx
    }

    pub fn multi(&self, linear: usize) -> [usize; 3] {
        debug_assert!(linear < self.node_count());
        let s = self.strides();
        let mut rem = linear;
        let mut m = [0usize; 3];
        for k in 0..self.dim {
            m[k] = rem / s[k];
            rem %= s[k];
        }
        m
    }

    pub fn coord(&self, multi: [usize; 3]) -> [T; 3] {
        let mut p = [T::zero(); 3];
        for k in 0..self.dim {
            p[k] = self.origin[k] + self.h * T::of_usize(multi[k]);
        }
        p
    }

    pub fn is_boundary(&self, multi: [usize; 3]) -> bool {
        (0..self.dim).any(|k| multi[k] == 0 || multi[k] + 1 == self.extent[k])
    }

    /// Node nearest to `p`, clamped into the grid.
    pub fn nearest_node(&self, p: &[T; 3]) -> [usize; 3] {
        let mut m = [0usize; 3];
        for k in 0..self.dim {
            let s = ((p[k] - self.origin[k]) / self.h).round();
            let top = T::of_usize(self.extent[k] - 1);
            m[k] = s.max(T::zero()).min(top).as_f64() as usize;
        }
        m
    }

    /// Membership in the closed box, with slack `1e-9 h` against rounding.
    pub fn contains(&self, p: &[T; 3]) -> bool {
        let tol = T::of(1e-9) * self.h;
        let hi = self.upper();
        (0..self.dim).all(|k| p[k] >= self.origin[k] - tol && p[k] <= hi[k] + tol)
    }

    /// Whether the closed ball B(center, r) fits inside the box.
    pub fn ball_inside(&self, center: &[T; 3], r: T) -> bool {
        let tol = T::of(1e-9) * self.h;
        let hi = self.upper();
        (0..self.dim).all(|k| {
            center[k] - r >= self.origin[k] - tol && center[k] + r <= hi[k] + tol
        })
    }

    /// Shortest distance from `p` to the box boundary (0 outside the box).
    pub fn boundary_distance(&self, p: &[T; 3]) -> T {
        let hi = self.upper();
        let mut d = T::infinity();
        for k in 0..self.dim {
            d = d.min(p[k] - self.origin[k]).min(hi[k] - p[k]);
        }
        d.max(T::zero())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "dim": self.dim,
            "h": self.h.as_f64(),
            "extent": &self.extent[..self.dim],
            "origin": self.origin[..self.dim]
                .iter()
                .map(|x| x.as_f64())
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, Error<T>> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Format("grid entry must be an object".into()))?;
        let dim = obj
            .get("dim")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| Error::Format("grid entry needs integer dim".into()))?
            as usize;
        let h = obj
            .get("h")
            .and_then(|x| x.as_f64())
            .ok_or_else(|| Error::Format("grid entry needs numeric h".into()))?;
        let ext_list = obj
            .get("extent")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::Format("grid entry needs extent array".into()))?;
        let org_list = obj
            .get("origin")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::Format("grid entry needs origin array".into()))?;
        if ext_list.len() != dim || org_list.len() != dim {
            return Err(Error::Format(format!(
                "grid arrays must have {} entries",
                dim
            )));
        }
        let mut extent = [1usize; 3];
        let mut origin = [T::zero(); 3];
        for k in 0..dim {
            extent[k] = ext_list[k]
                .as_u64()
                .ok_or_else(|| Error::Format("extent entries must be integers".into()))?
                as usize;
            origin[k] = T::of(
                org_list[k]
                    .as_f64()
                    .ok_or_else(|| Error::Format("origin entries must be numbers".into()))?,
            );
        }
        Self::new(dim, extent, T::of(h), origin)
    }
}

/// Node values on a [`Grid`], row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField<T> {
    grid: Grid<T>,
    values: Vec<T>,
}

impl<T: Real> ScalarField<T> {
    pub fn zeros(grid: Grid<T>) -> Self {
        let n = grid.node_count();
        ScalarField { grid, values: vec![T::zero(); n] }
    }

    pub fn from_fn(grid: Grid<T>, f: impl Fn(&[T; 3]) -> T) -> Self {
        let n = grid.node_count();
        let values = (0..n).map(|i| f(&grid.coord(grid.multi(i)))).collect();
        ScalarField { grid, values }
    }

    pub fn from_values(grid: Grid<T>, values: Vec<T>) -> Result<Self, Error<T>> {
        if values.len() != grid.node_count() {
            return Err(Error::ShapeMismatch(format!(
                "grid has {} nodes but {} values were given",
                grid.node_count(),
                values.len()
            )));
        }
        Ok(ScalarField { grid, values })
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    pub fn at(&self, multi: [usize; 3]) -> T {
        self.values[self.grid.linear(multi)]
    }

    pub fn min_value(&self) -> T {
        self.values.iter().copied().fold(T::infinity(), T::min)
    }

    pub fn max_value(&self) -> T {
        self.values.iter().copied().fold(T::neg_infinity(), T::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.values.len(), other.values.len(), "fields must share a grid");
        self.values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| (a - b).abs())
            .fold(T::zero(), T::max)
    }

    /// Multilinear interpolation. Exact at nodes and for functions that are
    /// affine per axis.
    pub fn interpolate(&self, p: &[T; 3]) -> Result<T, Error<T>> {
        let g = &self.grid;
        if !g.contains(p) {
            return Err(Error::OutOfDomain(point_f64(p)));
        }
        let mut base = [0usize; 3];
        let mut frac = [T::zero(); 3];
        for k in 0..g.dim {
            let s = (p[k] - g.origin[k]) / g.h;
            let top_cell = T::of_usize(g.extent[k] - 2);
            let cell = s.floor().max(T::zero()).min(top_cell);
            base[k] = cell.as_f64() as usize;
            frac[k] = (s - cell).max(T::zero()).min(T::one());
        }
        let mut acc = T::zero();
        for corner in 0..(1usize << g.dim) {
            let mut w = T::one();
            let mut node = base;
            for k in 0..g.dim {
                if corner & (1 << k) != 0 {
                    w = w * frac[k];
                    node[k] += 1;
                } else {
                    w = w * (T::one() - frac[k]);
                }
            }
            acc = acc + w * self.values[g.linear(node)];
        }
        Ok(acc)
    }
}

/// Applies the standard (2 dim + 1)-point discrete Laplacian on interior
/// nodes; boundary slots of the result are zero. Exact for quadratics.
pub fn laplacian_apply<T: Real>(u: &ScalarField<T>) -> ScalarField<T> {
    let g = *u.grid();
    let s = g.strides();
    let inv_h2 = T::one() / (g.h() * g.h());
    let mut out = ScalarField::zeros(g);
    let vals = u.values();
    for idx in 0..g.node_count() {
        let m = g.multi(idx);
        if g.is_boundary(m) {
            continue;
        }
        let mut acc = T::zero();
        for k in 0..g.dim() {
            acc = acc + vals[idx - s[k]] - T::of(2.0) * vals[idx] + vals[idx + s[k]];
        }
        out.values_mut()[idx] = acc * inv_h2;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn unit_square(n: usize) -> Grid<f64> {
        let h = 2.0 / (n as f64 - 1.0);
        Grid::new(2, [n, n, 1], h, [-1.0, -1.0, 0.0]).unwrap()
    }

    #[test]
    fn linear_and_multi_are_inverse() {
        let g = Grid::<f64>::new(3, [4, 5, 6], 0.5, [0.0; 3]).unwrap();
        for idx in 0..g.node_count() {
            assert_eq!(g.linear(g.multi(idx)), idx);
        }
        // last axis fastest
        assert_eq!(g.linear([0, 0, 1]), 1);
        assert_eq!(g.linear([0, 1, 0]), 6);
        assert_eq!(g.linear([1, 0, 0]), 30);
    }

    #[test]
    fn from_box_checks_tiling() {
        let g = Grid::<f64>::from_box(1, [0.0; 3], [1.0, 0.0, 0.0], 0.25).unwrap();
        assert_eq!(g.extent()[0], 5);
        assert!(Grid::<f64>::from_box(1, [0.0; 3], [1.0, 0.0, 0.0], 0.3).is_err());
        // h = 1 tiles the box but leaves only 2 nodes
        assert!(Grid::<f64>::from_box(1, [0.0; 3], [1.0, 0.0, 0.0], 1.0).is_err());
        assert!(Grid::<f64>::new(2, [3, 2, 1], 0.1, [0.0; 3]).is_err());
        assert!(Grid::<f64>::new(4, [3, 3, 3], 0.1, [0.0; 3]).is_err());
    }

    #[test]
    fn corner_coordinates_match_box() {
        let g = unit_square(33);
        assert_eq!(g.coord([0, 0, 0]), [-1.0, -1.0, 0.0]);
        let hi = g.coord([32, 32, 0]);
        assert_abs_diff_eq!(hi[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(hi[1], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn boundary_node_count_is_perimeter() {
        let g = Grid::<f64>::new(2, [7, 5, 1], 0.25, [0.0; 3]).unwrap();
        let count = (0..g.node_count())
            .filter(|&i| g.is_boundary(g.multi(i)))
            .count();
        assert_eq!(count, 7 * 5 - 5 * 3);
    }

    #[test]
    fn interpolation_is_exact_for_affine_fields() {
        let g = unit_square(17);
        let u = ScalarField::from_fn(g, |p| 2.0 + 3.0 * p[0] - 5.0 * p[1]);
        for &(x, y) in &[(0.13, -0.7), (-0.99, 0.99), (0.5, 0.5), (1.0, -1.0)] {
            let got = u.interpolate(&[x, y, 0.0]).unwrap();
            assert_abs_diff_eq!(got, 2.0 + 3.0 * x - 5.0 * y, epsilon = 1e-12);
        }
    }

    #[test]
    fn interpolation_hits_node_values_exactly() {
        let g = unit_square(9);
        let u = ScalarField::from_fn(g, |p| (p[0] * 7.3).sin() + p[1] * p[1]);
        for idx in 0..g.node_count() {
            let p = g.coord(g.multi(idx));
            assert_eq!(u.interpolate(&p).unwrap(), u.values()[idx]);
        }
    }

    #[test]
    fn interpolation_rejects_outside_points() {
        let g = unit_square(9);
        let u = ScalarField::zeros(g);
        assert!(matches!(
            u.interpolate(&[1.5, 0.0, 0.0]),
            Err(Error::OutOfDomain(_))
        ));
    }

    #[test]
    fn laplacian_is_exact_on_quadratics() {
        let g = unit_square(17);
        let u = ScalarField::from_fn(g, |p| 0.5 * (p[0] * p[0] + p[1] * p[1]));
        let lap = laplacian_apply(&u);
        for idx in 0..g.node_count() {
            let m = g.multi(idx);
            if g.is_boundary(m) {
                assert_eq!(lap.values()[idx], 0.0);
            } else {
                assert_abs_diff_eq!(lap.values()[idx], 2.0, epsilon = 1e-11);
            }
        }
    }

    #[test]
    fn laplacian_in_one_dimension() {
        let g = Grid::<f64>::from_box(1, [0.0; 3], [1.0, 0.0, 0.0], 0.125).unwrap();
        let u = ScalarField::from_fn(g, |p| p[0] * p[0] * 3.0);
        let lap = laplacian_apply(&u);
        for idx in 1..g.node_count() - 1 {
            assert_abs_diff_eq!(lap.values()[idx], 6.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn ball_and_distance_queries() {
        let g = unit_square(33);
        assert!(g.ball_inside(&[0.0, 0.0, 0.0], 0.99));
        assert!(!g.ball_inside(&[0.5, 0.0, 0.0], 0.6));
        assert_abs_diff_eq!(g.boundary_distance(&[0.25, 0.0, 0.0]), 0.75, epsilon = 1e-12);
    }

    #[test]
    fn grid_json_round_trip() {
        let g = Grid::<f64>::new(2, [9, 17, 1], 0.125, [-1.0, 0.0, 0.0]).unwrap();
        let back = Grid::<f64>::from_json(&g.to_json()).unwrap();
        assert_eq!(g, back);
    }
}
