//! Operator-class predicates. Tolerances are relative to `max(1, ‖A‖_max)`
//! except where a check compares against an absolute quantity (eigenvalue
//! sign, unit trace).

use super::eigen::eig_of_hermitian_part;
use super::matrix::ComplexMatrix;

/// Default tolerance for every class check.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Tolerance for `U†U = I`.
pub const UNITARY_TOL: f64 = 1e-9;

/// ‖A − A†‖_max.
pub fn hermitian_defect(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((a.get(i, j) - a.get(j, i).conj()).norm());
        }
    }
    worst
}

pub fn is_hermitian(a: &ComplexMatrix, tol: f64) -> bool {
    hermitian_defect(a) <= tol * a.max_abs().max(1.0)
}

pub fn is_projector(a: &ComplexMatrix, tol: f64) -> bool {
    if !is_hermitian(a, tol) {
        return false;
    }
    let sq = a.mul(a);
    sq.max_abs_diff(a).expect("same dim") <= tol * a.max_abs().max(1.0)
}

pub fn is_density(a: &ComplexMatrix, tol: f64) -> bool {
    if !is_hermitian(a, tol) {
        return false;
    }
    if (a.trace().re - 1.0).abs() > tol {
        return false;
    }
    min_eigenvalue(a) >= -tol
}

/// ‖U†U − I‖_max.
pub fn unitary_defect(u: &ComplexMatrix) -> f64 {
    u.adjoint()
        .mul(u)
        .max_abs_diff(&ComplexMatrix::identity(u.dim()))
        .expect("same dim")
}

pub fn is_unitary(u: &ComplexMatrix, tol: f64) -> bool {
    unitary_defect(u) <= tol
}

/// Smallest eigenvalue of the Hermitian part.
pub fn min_eigenvalue(a: &ComplexMatrix) -> f64 {
    eig_of_hermitian_part(a).eigenvalues[0]
}
