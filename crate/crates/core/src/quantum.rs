//! Hermitian generalization of the classical rule.
//!
//! Sets of perceptions become Hermitian projectors and the state becomes a
//! density matrix; probabilities are `tr(P ρ)`. Both types validate once at
//! construction and are trusted afterwards.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcore::{
    hermitian_eig, is_density, is_projector, unitary_defect, ComplexMatrix, DEFAULT_TOL,
    UNITARY_TOL,
};

/// Largest imaginary part admitted in real mode.
pub const REAL_TOL: f64 = 1e-12;

/// Pre-clamp slack for probabilities; anything beyond is a contract breach.
pub const PROB_SLACK: f64 = 1e-9;

/// Whether operators may carry complex entries or must be real symmetric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RealityMode {
    #[default]
    Complex,
    Real,
}

/// In real mode, rejects matrices with any `|im| > 1e-12`.
pub fn enforce_reality(mode: RealityMode, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    if mode == RealityMode::Real {
        let max_imag = a.max_imag();
        if max_imag > REAL_TOL {
            return Err(Error::NotReal { max_imag });
        }
    }
    Ok(a.clone())
}

/// Hermitian idempotent operator.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector {
    mat: ComplexMatrix,
}

impl Projector {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        Self::validated(RealityMode::Complex, mat, DEFAULT_TOL)
    }

    pub fn new_in(mode: RealityMode, mat: ComplexMatrix) -> Result<Self> {
        Self::validated(mode, mat, DEFAULT_TOL)
    }

    pub fn validated(mode: RealityMode, mat: ComplexMatrix, tol: f64) -> Result<Self> {
        let mat = enforce_reality(mode, &mat)?;
        if !is_projector(&mat, tol) {
            return Err(Error::NotProjector);
        }
        Ok(Self { mat })
    }

    /// Skips validation; used where the result is a projector by algebra.
    pub(crate) fn trusted(mat: ComplexMatrix) -> Self {
        Self { mat }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: ComplexMatrix::identity(dim),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    /// `I − P`.
    pub fn complement(&self) -> Self {
        Self {
            mat: ComplexMatrix::identity(self.dim())
                .sub(&self.mat)
                .expect("same dim"),
        }
    }

    pub fn rank(&self) -> usize {
        self.mat.trace().re.round() as usize
    }
}

/// Positive semidefinite Hermitian operator with unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        Self::validated(RealityMode::Complex, mat, DEFAULT_TOL)
    }

    pub fn new_in(mode: RealityMode, mat: ComplexMatrix) -> Result<Self> {
        Self::validated(mode, mat, DEFAULT_TOL)
    }

    pub fn validated(mode: RealityMode, mat: ComplexMatrix, tol: f64) -> Result<Self> {
        let mat = enforce_reality(mode, &mat)?;
        if !is_density(&mat, tol) {
            return Err(Error::NotDensity);
        }
        Ok(Self { mat })
    }

    pub(crate) fn trusted(mat: ComplexMatrix) -> Self {
        Self { mat }
    }

    /// Maximally mixed state `I/n`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            mat: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    /// `|ψ⟩⟨ψ|` for a normalized copy of `psi`.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::NotDensity);
        }
        let unit: Vec<Complex64> = psi.iter().map(|z| z / norm).collect();
        Ok(Self {
            mat: ComplexMatrix::outer(&unit)?,
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    /// `tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        self.mat.mul(&self.mat).trace().re
    }

    /// Diagnostic only: a pure state is itself a rank-1 projector.
    pub fn is_pure(&self) -> bool {
        (self.purity() - 1.0).abs() <= 1e-9
    }
}

/// Checks a raw probability against `[0, 1]` with [`PROB_SLACK`] and clamps.
pub(crate) fn clamp_probability(value: Complex64, what: &str) -> Result<f64> {
    if value.im.abs() > PROB_SLACK {
        return Err(Error::NumericalIntegrity(format!(
            "{what} has imaginary part {:.3e}",
            value.im
        )));
    }
    let p = value.re;
    if !(-PROB_SLACK..=1.0 + PROB_SLACK).contains(&p) {
        return Err(Error::NumericalIntegrity(format!(
            "{what} = {p} outside [0, 1]"
        )));
    }
    Ok(p.clamp(0.0, 1.0))
}

/// `tr(P ρ)` without forming the product.
pub(crate) fn trace_of_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    let n = a.dim();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += a.get(i, k) * b.get(k, i);
        }
    }
    acc
}

/// Probability of the set represented by `p` in state `rho`.
pub fn trace_prob(p: &Projector, rho: &DensityMatrix) -> Result<f64> {
    p.mat.check_dim(&rho.mat)?;
    clamp_probability(trace_of_product(&p.mat, &rho.mat), "tr(P rho)")
}

/// `U A U†` for unitary `U`.
pub fn unitary_conjugate(u: &ComplexMatrix, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    u.check_dim(a)?;
    let defect = unitary_defect(u);
    if defect > UNITARY_TOL {
        return Err(Error::NotUnitary { defect });
    }
    Ok(u.mul(a).mul(&u.adjoint()))
}

/// `|tr(Pρ) − tr(UPU† UρU†)|`.
pub fn check_invariance(p: &Projector, rho: &DensityMatrix, u: &ComplexMatrix) -> Result<f64> {
    let before = trace_prob(p, rho)?;
    let p_rot = Projector::trusted(unitary_conjugate(u, &p.mat)?);
    let rho_rot = DensityMatrix::trusted(unitary_conjugate(u, &rho.mat)?);
    let after = trace_prob(&p_rot, &rho_rot)?;
    Ok((before - after).abs())
}

/// ‖AB − BA‖_max.
pub fn commutator_norm(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    a.check_dim(b)?;
    a.mul(b).max_abs_diff(&b.mul(a))
}

pub fn commutes(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> Result<bool> {
    let defect = commutator_norm(a, b)?;
    Ok(defect <= tol * (a.max_abs() * b.max_abs()).max(1.0))
}

/// Intersection of two commuting sharp sets: the product `PQ`.
///
/// Non-commuting projectors have no such product projector; that case is an
/// error rather than a silently returned non-projector.
pub fn projector_meet(p: &Projector, q: &Projector) -> Result<Projector> {
    let defect = commutator_norm(&p.mat, &q.mat)?;
    if defect > DEFAULT_TOL * (p.mat.max_abs() * q.mat.max_abs()).max(1.0) {
        return Err(Error::NonCommuting { defect });
    }
    let product = p.mat.mul(&q.mat);
    if !is_projector(&product, DEFAULT_TOL) {
        return Err(Error::NonCommuting { defect });
    }
    Ok(Projector { mat: product })
}

/// Spectral expansion `Σ_k λ_k ⟨v_k|P|v_k⟩` of `tr(Pρ)`.
pub fn spectral_trace_prob(p: &Projector, rho: &DensityMatrix) -> Result<f64> {
    p.mat.check_dim(&rho.mat)?;
    let eig = hermitian_eig(&rho.mat)?;
    let n = p.dim();
    let mut total = Complex64::new(0.0, 0.0);
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        let v = eig.eigenvector(k);
        let mut quad = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                quad += v[i].conj() * p.mat.get(i, j) * v[j];
            }
        }
        total += quad * lambda;
    }
    clamp_probability(total, "spectral tr(P rho)")
}
