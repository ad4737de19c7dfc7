//! Frobenius projection onto the unit-trace positive semidefinite matrices.

use crate::linalg::{project_simplex, SymMat};
use crate::scalar::Real;

/// Nearest matrix (in Frobenius norm) with eigenvalues >= 0 summing to 1.
///
/// A symmetric matrix commutes with its own projection, so the problem
/// reduces to projecting the eigenvalue vector onto the probability simplex
/// while keeping the eigenvectors.
pub fn project_psd_trace1<T: Real>(a: &SymMat<T>) -> SymMat<T> {
    let dim = a.dim();
    let (values, vectors) = a.eigen();
    let projected = project_simplex(&values[..dim]);
    let mut lam = [T::zero(); 3];
    lam[..dim].copy_from_slice(&projected);
    SymMat::from_eigen(dim, &lam, &vectors)
}

/// Whether the matrix lies in the constraint set: symmetric by type, trace
/// one and eigenvalues nonnegative within `tol`.
pub fn in_profile_set<T: Real>(a: &SymMat<T>, tol: T) -> bool {
    let (values, _) = a.eigen();
    let trace_ok = (a.trace() - T::one()).abs() <= tol;
    let psd_ok = values[..a.dim()].iter().all(|&l| l >= -tol);
    trace_ok && psd_ok
}
