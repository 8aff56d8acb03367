//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary and then applies the real symmetric Jacobi rotation, so the
//! combined 2×2 unitary is
//!
//! ```text
//! G = [ c          s         ]
//!     [ -s e^{-iφ}  c e^{-iφ} ]     with a_pq = |a_pq| e^{iφ}
//! ```
//!
//! and `A ← G† A G`, `V ← V G`. Sweeps stop once the off-diagonal mass is at
//! rounding level relative to the Frobenius norm or stops shrinking.

use num_complex::Complex64;

use super::checks::{hermitian_defect, DEFAULT_TOL};
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Columns are orthonormal eigenvectors.
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// `V Λ V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for r in 0..n {
            for c in 0..n {
                scaled.set(r, c, v.get(r, c) * self.eigenvalues[c]);
            }
        }
        scaled.mul(&v.adjoint())
    }

    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        self.eigenvectors.column(k)
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Fails with `NotHermitian` when ‖A − A†‖_max exceeds
/// `1e-10·max(1, ‖A‖_max)`.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<EigenDecomposition> {
    let defect = hermitian_defect(a);
    if defect > DEFAULT_TOL * a.max_abs().max(1.0) {
        return Err(Error::NotHermitian { defect });
    }
    Ok(eig_of_hermitian_part(a))
}

/// Decomposes `(A + A†)/2` without checking how far `A` is from Hermitian.
pub(crate) fn eig_of_hermitian_part(a: &ComplexMatrix) -> EigenDecomposition {
    let n = a.dim();
    let mut m = a.hermitian_part();
    let mut v = ComplexMatrix::identity(n);

    let frob: f64 = m
        .as_slice()
        .iter()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt();
    if frob > 0.0 {
        let mut prev_off = f64::INFINITY;
        for _ in 0..MAX_SWEEPS {
            let off: f64 = (0..n)
                .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
                .map(|(p, q)| m.get(p, q).norm_sqr())
                .sum::<f64>()
                .sqrt();
            if off <= f64::EPSILON * 1e-2 * frob || off >= prev_off {
                break;
            }
            prev_off = off;
            for p in 0..n {
                for q in p + 1..n {
                    rotate(&mut m, &mut v, p, q);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));

    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = ComplexMatrix::zeros(n);
    for (new_col, &old_col) in order.iter().enumerate() {
        let col = v.column(old_col);
        let phase = phase_of_largest(&col);
        for (r, z) in col.iter().enumerate() {
            vectors.set(r, new_col, z * phase);
        }
    }
    EigenDecomposition {
        eigenvalues,
        eigenvectors: vectors,
    }
}

/// Unit factor that makes the first largest-magnitude component real and
/// nonnegative.
fn phase_of_largest(col: &[Complex64]) -> Complex64 {
    let mut best = 0;
    let mut best_norm = -1.0;
    for (i, z) in col.iter().enumerate() {
        let nrm = z.norm();
        if nrm > best_norm * (1.0 + 1e-12) {
            best = i;
            best_norm = nrm;
        }
    }
    let z = col[best];
    if z.norm() == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        z.conj() / z.norm()
    }
}

fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = m.get(p, q);
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = m.get(p, p).re;
    let aqq = m.get(q, q).re;
    // Skip pivots that are negligible against both diagonal entries.
    if mag <= f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        m.set(p, q, Complex64::new(0.0, 0.0));
        m.set(q, p, Complex64::new(0.0, 0.0));
        return;
    }
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta.is_infinite() {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let unphase = (apq / mag).conj();

    let g_pp = Complex64::new(c, 0.0);
    let g_pq = Complex64::new(s, 0.0);
    let g_qp = unphase * (-s);
    let g_qq = unphase * c;

    let n = m.dim();
    // Columns: A ← A G.
    for k in 0..n {
        let akp = m.get(k, p);
        let akq = m.get(k, q);
        m.set(k, p, akp * g_pp + akq * g_qp);
        m.set(k, q, akp * g_pq + akq * g_qq);
    }
    // Rows: A ← G† A.
    for k in 0..n {
        let apk = m.get(p, k);
        let aqk = m.get(q, k);
        m.set(p, k, g_pp.conj() * apk + g_qp.conj() * aqk);
        m.set(q, k, g_pq.conj() * apk + g_qq.conj() * aqk);
    }
    m.set(p, q, Complex64::new(0.0, 0.0));
    m.set(q, p, Complex64::new(0.0, 0.0));
    let dp = m.get(p, p).re;
    let dq = m.get(q, q).re;
    m.set(p, p, Complex64::new(dp, 0.0));
    m.set(q, q, Complex64::new(dq, 0.0));

    for k in 0..n {
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, vkp * g_pp + vkq * g_qp);
        v.set(k, q, vkp * g_pq + vkq * g_qq);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::random::{random_hermitian, random_unitary};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn unitarity_defect(v: &ComplexMatrix) -> f64 {
        v.adjoint()
            .mul(v)
            .max_abs_diff(&ComplexMatrix::identity(v.dim()))
            .unwrap()
    }

    #[test]
    fn diagonal_input_sorted() {
        let a = ComplexMatrix::from_real_diag(&[3.0, 1.0, 2.0]).unwrap();
        let e = hermitian_eig(&a).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 2.0, 3.0]);
        // Phase convention: each column is a positive basis vector.
        assert_eq!(e.eigenvector(0), vec![c(0., 0.), c(1., 0.), c(0., 0.)]);
    }

    #[test]
    fn pauli_x_spectrum() {
        let a = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let e = hermitian_eig(&a).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-14);
        assert!(e.reconstruct().max_abs_diff(&a).unwrap() < 1e-14);
    }

    #[test]
    fn complex_two_by_two() {
        // trace 3, determinant 0
        let a = ComplexMatrix::from_rows(vec![
            vec![c(1., 0.), c(1., 1.)],
            vec![c(1., -1.), c(2., 0.)],
        ])
        .unwrap();
        let e = hermitian_eig(&a).unwrap();
        assert!(e.eigenvalues[0].abs() < 1e-14);
        assert!((e.eigenvalues[1] - 3.0).abs() < 1e-14);
        assert!(e.reconstruct().max_abs_diff(&a).unwrap() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let a =
            ComplexMatrix::from_rows(vec![vec![c(0., 0.), c(0., 1.)], vec![c(0., 1.), c(0., 0.)]])
                .unwrap();
        assert!(matches!(hermitian_eig(&a), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn zero_and_one_by_one() {
        let e = hermitian_eig(&ComplexMatrix::zeros(3)).unwrap();
        assert_eq!(e.eigenvalues, vec![0.0; 3]);
        assert_eq!(e.eigenvectors, ComplexMatrix::identity(3));
        let e = hermitian_eig(&ComplexMatrix::from_real_diag(&[-2.5]).unwrap()).unwrap();
        assert_eq!(e.eigenvalues, vec![-2.5]);
    }

    #[test]
    fn reconstruction_and_phase_on_random_inputs() {
        for dim in 2..=8 {
            for seed in 0..100u64 {
                let a = random_hermitian(dim, seed * 31 + dim as u64);
                let e = hermitian_eig(&a).unwrap();
                let scale = a.max_abs().max(1.0);
                assert!(e.reconstruct().max_abs_diff(&a).unwrap() <= 1e-9 * scale);
                assert!(unitarity_defect(&e.eigenvectors) <= 1e-9);
                assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
                for k in 0..dim {
                    let col = e.eigenvector(k);
                    let max = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
                    let lead = col
                        .iter()
                        .find(|z| z.norm() >= max * (1.0 - 1e-12))
                        .unwrap();
                    assert!(lead.im.abs() < 1e-12 && lead.re > 0.0);
                }
            }
        }
    }

    #[test]
    fn degenerate_spectrum() {
        let u = random_unitary(6, 9);
        let d = ComplexMatrix::from_real_diag(&[1.0, 1.0, 1.0, -2.0, -2.0, 5.0]).unwrap();
        let a = u.mul(&d).mul(&u.adjoint());
        let e = hermitian_eig(&a).unwrap();
        let expected = [-2.0, -2.0, 1.0, 1.0, 1.0, 5.0];
        for (got, want) in e.eigenvalues.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!(e.reconstruct().max_abs_diff(&a).unwrap() < 1e-12);
    }

    #[test]
    fn larger_dimension() {
        let a = random_hermitian(48, 5);
        let e = hermitian_eig(&a).unwrap();
        assert!(e.reconstruct().max_abs_diff(&a).unwrap() <= 1e-9 * a.max_abs().max(1.0));
        assert!(unitarity_defect(&e.eigenvectors) <= 1e-9);
    }
}
