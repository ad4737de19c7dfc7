//! Small dense linear algebra for the n <= 3 geometry: padded 3-vectors,
//! symmetric matrices, a cyclic Jacobi eigensolver and the probability
//! simplex projection. Nothing here allocates per element; sizes are tiny
//! and everything is deterministic.

use crate::scalar::Real;

/// Points and directions are stored as `[T; 3]`; axes at or beyond the
/// active dimension hold zero.
pub fn dot<T: Real>(dim: usize, a: &[T; 3], b: &[T; 3]) -> T {
    let mut s = T::zero();
    for k in 0..dim {
        s = s + a[k] * b[k];
    }
    s
}

pub fn norm<T: Real>(dim: usize, a: &[T; 3]) -> T {
    dot(dim, a, a).sqrt()
}

pub fn scale<T: Real>(dim: usize, a: &[T; 3], s: T) -> [T; 3] {
    let mut out = [T::zero(); 3];
    for k in 0..dim {
        out[k] = a[k] * s;
    }
    out
}

pub fn add<T: Real>(dim: usize, a: &[T; 3], b: &[T; 3]) -> [T; 3] {
    let mut out = [T::zero(); 3];
    for k in 0..dim {
        out[k] = a[k] + b[k];
    }
    out
}

pub fn sub<T: Real>(dim: usize, a: &[T; 3], b: &[T; 3]) -> [T; 3] {
    let mut out = [T::zero(); 3];
    for k in 0..dim {
        out[k] = a[k] - b[k];
    }
    out
}

/// Angle between two directions in radians, clamped against rounding.
pub fn angle_between<T: Real>(dim: usize, a: &[T; 3], b: &[T; 3]) -> T {
    let c = dot(dim, a, b) / (norm(dim, a) * norm(dim, b));
    c.min(T::one()).max(-T::one()).acos()
}

/// Symmetric matrix on the leading `dim x dim` block of fixed 3x3 storage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymMat<T> {
    dim: usize,
    m: [[T; 3]; 3],
}

impl<T: Real> SymMat<T> {
    pub fn zeros(dim: usize) -> Self {
        SymMat { dim, m: [[T::zero(); 3]; 3] }
    }

    /// s * identity on the active block.
    pub fn scaled_identity(dim: usize, s: T) -> Self {
        let mut out = Self::zeros(dim);
        for k in 0..dim {
            out.m[k][k] = s;
        }
        out
    }

    /// Builds from entries, symmetrizing nothing: caller passes the full
    /// square block and asserts symmetry.
    pub fn from_entries(dim: usize, entries: &[[T; 3]; 3]) -> Self {
        let mut out = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                out.m[i][j] = entries[i][j];
            }
        }
        out
    }

    /// Rank-one matrix v vᵀ.
    pub fn outer(dim: usize, v: &[T; 3]) -> Self {
        let mut out = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                out.m[i][j] = v[i] * v[j];
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.m[i][j]
    }

    pub fn set_sym(&mut self, i: usize, j: usize, v: T) {
        self.m[i][j] = v;
        self.m[j][i] = v;
    }

    pub fn trace(&self) -> T {
        let mut s = T::zero();
        for k in 0..self.dim {
            s = s + self.m[k][k];
        }
        s
    }

    /// Quadratic form xᵀ M x.
    pub fn quad(&self, x: &[T; 3]) -> T {
        let mut s = T::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                s = s + self.m[i][j] * x[i] * x[j];
            }
        }
        s
    }

    pub fn frobenius(&self) -> T {
        let mut s = T::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                s = s + self.m[i][j] * self.m[i][j];
            }
        }
        s.sqrt()
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.m[i][j] = self.m[i][j] - other.m[i][j];
            }
        }
        out
    }

    /// Eigendecomposition of the active block; eigenvalues ascending,
    /// `vectors[k]` is the unit eigenvector for `values[k]`.
    pub fn eigen(&self) -> ([T; 3], [[T; 3]; 3]) {
        let n = self.dim;
        let mut flat = vec![T::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                flat[i * n + j] = self.m[i][j];
            }
        }
        let (vals, vecs) = sym_eigen(n, &flat);
        let mut values = [T::zero(); 3];
        let mut vectors = [[T::zero(); 3]; 3];
        for k in 0..n {
            values[k] = vals[k];
            for i in 0..n {
                vectors[k][i] = vecs[i * n + k];
            }
        }
        (values, vectors)
    }

    /// Rebuilds Σ λ_k v_k v_kᵀ.
    pub fn from_eigen(dim: usize, values: &[T; 3], vectors: &[[T; 3]; 3]) -> Self {
        let mut out = Self::zeros(dim);
        for k in 0..dim {
            for i in 0..dim {
                for j in 0..dim {
                    out.m[i][j] = out.m[i][j] + values[k] * vectors[k][i] * vectors[k][j];
                }
            }
        }
        // enforce exact symmetry of the stored entries
        for i in 0..dim {
            for j in 0..i {
                let avg = (out.m[i][j] + out.m[j][i]) * T::of(0.5);
                out.m[i][j] = avg;
                out.m[j][i] = avg;
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<Vec<f64>> = (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.m[i][j].as_f64()).collect())
            .collect();
        serde_json::json!(rows)
    }
}

/// Cyclic Jacobi eigendecomposition of a symmetric `n x n` matrix stored
/// row-major. Returns eigenvalues ascending and eigenvectors as columns of
/// the returned row-major matrix. Sizes here are at most 6 (the symmetric
/// coordinates of a 3x3 matrix), where Jacobi is exact to rounding in a
/// handful of sweeps.
pub fn sym_eigen<T: Real>(n: usize, a: &[T]) -> (Vec<T>, Vec<T>) {
    assert_eq!(a.len(), n * n, "matrix must be n x n");
    let mut w = a.to_vec();
    let mut v = vec![T::zero(); n * n];
    for i in 0..n {
        v[i * n + i] = T::one();
    }
    let tiny = T::of(1e-300);
    for _sweep in 0..64 {
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off = off + w[p * n + q] * w[p * n + q];
            }
        }
        let mut diag = T::zero();
        for p in 0..n {
            diag = diag + w[p * n + p] * w[p * n + p];
        }
        if off <= (diag + tiny) * T::of(1e-30) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = w[p * n + q];
                if apq.abs() <= tiny {
                    continue;
                }
                let theta = (w[q * n + q] - w[p * n + p]) / (T::of(2.0) * apq);
                let t = {
                    let s = if theta >= T::zero() { T::one() } else { -T::one() };
                    s / (theta.abs() + (theta * theta + T::one()).sqrt())
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let wkp = w[k * n + p];
                    let wkq = w[k * n + q];
                    w[k * n + p] = c * wkp - s * wkq;
                    w[k * n + q] = s * wkp + c * wkq;
                }
                for k in 0..n {
                    let wpk = w[p * n + k];
                    let wqk = w[q * n + k];
                    w[p * n + k] = c * wpk - s * wqk;
                    w[q * n + k] = s * wpk + c * wqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        w[i * n + i]
            .partial_cmp(&w[j * n + j])
            .expect("eigenvalues are finite")
    });
    let values: Vec<T> = order.iter().map(|&i| w[i * n + i]).collect();
    let mut vectors = vec![T::zero(); n * n];
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..n {
            vectors[row * n + new_col] = v[row * n + old_col];
        }
    }
    (values, vectors)
}

/// Euclidean projection onto the probability simplex {x >= 0, Σ x = 1}.
pub fn project_simplex<T: Real>(v: &[T]) -> Vec<T> {
    let n = v.len();
    assert!(n > 0);
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("finite entries"));
    let mut cumulative = T::zero();
    let mut tau = T::zero();
    let mut found = false;
    for (k, &u) in sorted.iter().enumerate() {
        cumulative = cumulative + u;
        let candidate = (cumulative - T::one()) / T::of_usize(k + 1);
        if u - candidate > T::zero() {
            tau = candidate;
        } else {
            found = true;
            break;
        }
    }
    let _ = found;
    v.iter().map(|&x| (x - tau).max(T::zero())).collect()
}
