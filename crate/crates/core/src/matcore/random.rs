//! Seeded random operators.
//!
//! All generators draw from `ChaCha8Rng::seed_from_u64(seed)`, so a seed
//! reproduces the same matrix on every platform.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::matrix::ComplexMatrix;
use crate::quantum::RealityMode;

fn gaussian(rng: &mut ChaCha8Rng, mode: RealityMode) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = match mode {
        RealityMode::Complex => rng.sample(StandardNormal),
        RealityMode::Real => 0.0,
    };
    Complex64::new(re, im)
}

/// Orthonormalizes the columns of a Gaussian matrix with two passes of
/// modified Gram–Schmidt. Positive `R` diagonal makes the result Haar
/// distributed.
fn haar(dim: usize, mode: RealityMode, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    assert!(dim >= 1, "dimension must be >= 1");
    let mut cols: Vec<Vec<Complex64>> = (0..dim)
        .map(|_| (0..dim).map(|_| gaussian(rng, mode)).collect())
        .collect();
    for k in 0..dim {
        for _pass in 0..2 {
            for j in 0..k {
                let (done, rest) = cols.split_at_mut(k);
                let q = &done[j];
                let v = &mut rest[0];
                let proj: Complex64 = q.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in v.iter_mut().zip(q) {
                    *x -= proj * y;
                }
            }
        }
        let norm = cols[k].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for x in cols[k].iter_mut() {
            *x /= norm;
        }
    }
    let mut m = ComplexMatrix::zeros(dim);
    for (c, col) in cols.iter().enumerate() {
        for (r, &z) in col.iter().enumerate() {
            m.set(r, c, z);
        }
    }
    m
}

/// Haar-random unitary. Deterministic in `seed`.
pub fn random_unitary(dim: usize, seed: u64) -> ComplexMatrix {
    random_unitary_in(RealityMode::Complex, dim, seed)
}

/// Haar-random real orthogonal matrix.
pub fn random_orthogonal(dim: usize, seed: u64) -> ComplexMatrix {
    random_unitary_in(RealityMode::Real, dim, seed)
}

pub fn random_unitary_in(mode: RealityMode, dim: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    haar(dim, mode, &mut rng)
}

/// Hermitian matrix `(G + G†)/2` with Gaussian `G`.
pub fn random_hermitian(dim: usize, seed: u64) -> ComplexMatrix {
    random_hermitian_in(RealityMode::Complex, dim, seed)
}

pub fn random_hermitian_in(mode: RealityMode, dim: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = (0..dim * dim).map(|_| gaussian(&mut rng, mode)).collect();
    ComplexMatrix::from_vec(dim, data)
        .expect("finite gaussian entries")
        .hermitian_part()
}

/// Projector of random rank in `1..dim` (rank 1 when `dim == 1`).
pub fn random_projector(dim: usize, seed: u64) -> ComplexMatrix {
    random_projector_in(RealityMode::Complex, dim, seed)
}

pub fn random_projector_in(mode: RealityMode, dim: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rank = if dim == 1 {
        1
    } else {
        rng.random_range(1..dim)
    };
    let u = haar(dim, mode, &mut rng);
    projector_onto_columns(&u, &(0..rank).collect::<Vec<_>>())
}

/// `Σ_k u_k u_k†` over the selected columns of `u`.
pub fn projector_onto_columns(u: &ComplexMatrix, columns: &[usize]) -> ComplexMatrix {
    let n = u.dim();
    let mut p = ComplexMatrix::zeros(n);
    for &c in columns {
        let outer = ComplexMatrix::outer(&u.column(c)).expect("finite");
        p = p.add(&outer).expect("same dim");
    }
    p.hermitian_part()
}

/// Full-rank density matrix `U diag(w) U†` with exponential weights `w`.
pub fn random_density(dim: usize, seed: u64) -> ComplexMatrix {
    random_density_in(RealityMode::Complex, dim, seed)
}

pub fn random_density_in(mode: RealityMode, dim: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = haar(dim, mode, &mut rng);
    let weights: Vec<f64> = (0..dim)
        .map(|_| -(1.0 - rng.random::<f64>()).ln())
        .collect();
    let total: f64 = weights.iter().sum();
    let d: Vec<f64> = weights.iter().map(|w| w / total).collect();
    let diag = ComplexMatrix::from_real_diag(&d).expect("finite");
    u.mul(&diag).mul(&u.adjoint()).hermitian_part()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::checks::{is_density, is_hermitian, unitary_defect, DEFAULT_TOL};

    #[test]
    fn one_dimensional_unitary_is_a_phase() {
        let u = random_unitary(1, 42);
        assert!((u.get(0, 0).norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn deterministic_in_seed() {
        assert_eq!(random_unitary(5, 7), random_unitary(5, 7));
        assert_ne!(random_unitary(5, 7), random_unitary(5, 8));
    }

    #[test]
    fn unitary_to_tolerance() {
        for seed in 0..50 {
            assert!(unitary_defect(&random_unitary(8, seed)) <= 1e-9);
            let o = random_orthogonal(8, seed);
            assert!(unitary_defect(&o) <= 1e-9);
            assert_eq!(o.max_imag(), 0.0);
        }
    }

    #[test]
    fn generated_classes() {
        for seed in 0..20 {
            assert!(is_hermitian(&random_hermitian(6, seed), DEFAULT_TOL));
            assert!(is_density(&random_density(6, seed), DEFAULT_TOL));
            assert_eq!(
                random_density_in(RealityMode::Real, 4, seed).max_imag(),
                0.0
            );
        }
    }
}
