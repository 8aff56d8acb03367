//! Dense complex matrices, Hermitian spectral decomposition and operator
//! class checks.

pub mod checks;
pub mod eigen;
pub mod matrix;
pub mod random;

pub use checks::{
    hermitian_defect, is_density, is_hermitian, is_projector, is_unitary, min_eigenvalue,
    unitary_defect, DEFAULT_TOL, UNITARY_TOL,
};
pub use eigen::{hermitian_eig, EigenDecomposition};
pub use matrix::ComplexMatrix;
pub use random::{random_orthogonal, random_unitary};

pub use num_complex::Complex64;

/// Conjugate transpose.
pub fn adjoint(a: &ComplexMatrix) -> ComplexMatrix {
    a.adjoint()
}

pub fn mat_mul(a: &ComplexMatrix, b: &ComplexMatrix) -> crate::Result<ComplexMatrix> {
    a.mat_mul(b)
}

pub fn trace(a: &ComplexMatrix) -> Complex64 {
    a.trace()
}
