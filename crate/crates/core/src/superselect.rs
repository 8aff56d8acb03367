//! Time-independent Hamiltonian evolution and energy superselection.
//!
//! Averaging `e^{-iHt} ρ e^{iHt}` over infinite time removes every coherence
//! between distinct energies. The result is `Σ_k Π_k ρ Π_k` over the spectral
//! projectors `Π_k` of `H`, computed here in closed form. Projectors that are
//! block-diagonal in the same decomposition see probabilities that do not
//! depend on `t`.
//!
//! Units have `ħ = 1`. Any Hermitian conserved quantity can stand in for `H`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcore::{hermitian_eig, ComplexMatrix, EigenDecomposition};
use crate::quantum::{enforce_reality, DensityMatrix, Projector, RealityMode};

/// Compliance threshold for `‖Σ_k Π_k P Π_k − P‖_max`.
pub const COMPLIANCE_TOL: f64 = 1e-9;

/// Hermitian generator with its cached spectral decomposition.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    mat: ComplexMatrix,
    eig: EigenDecomposition,
}

impl Hamiltonian {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        Self::new_in(RealityMode::Complex, mat)
    }

    pub fn new_in(mode: RealityMode, mat: ComplexMatrix) -> Result<Self> {
        let mat = enforce_reality(mode, &mat)?;
        let eig = hermitian_eig(&mat)?;
        Ok(Self { mat, eig })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn eigen(&self) -> &EigenDecomposition {
        &self.eig
    }

    pub fn energies(&self) -> &[f64] {
        &self.eig.eigenvalues
    }

    /// `1e-8·max(1, |E|_max)`.
    pub fn default_cluster_tol(&self) -> f64 {
        let emax = self
            .eig
            .eigenvalues
            .iter()
            .map(|e| e.abs())
            .fold(0.0, f64::max);
        1e-8 * emax.max(1.0)
    }

    /// `U(t) = V diag(e^{-iE_j t}) V†`.
    pub fn propagator(&self, t: f64) -> ComplexMatrix {
        let n = self.dim();
        let v = &self.eig.eigenvectors;
        let mut scaled = v.clone();
        for (c, &e) in self.eig.eigenvalues.iter().enumerate() {
            let phase = Complex64::from_polar(1.0, -e * t);
            for r in 0..n {
                scaled.set(r, c, v.get(r, c) * phase);
            }
        }
        scaled.mul(&v.adjoint())
    }

    pub fn energy_blocks(&self) -> EnergyBlocks {
        energy_blocks(self, self.default_cluster_tol())
    }
}

/// Partition of the eigen-indices into degenerate clusters and their spectral
/// projectors.
#[derive(Debug, Clone)]
pub struct EnergyBlocks {
    /// 0-based indices into the ascending spectrum.
    pub clusters: Vec<Vec<usize>>,
    /// Mean energy of each cluster.
    pub energies: Vec<f64>,
    pub projectors: Vec<ComplexMatrix>,
}

impl EnergyBlocks {
    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    /// `Σ_k Π_k A Π_k`.
    pub fn pinch(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        let first = &self.projectors[0];
        first.check_dim(a)?;
        let mut out = ComplexMatrix::zeros(a.dim());
        for pi in &self.projectors {
            out = out.add(&pi.mul(a).mul(pi))?;
        }
        Ok(out)
    }

    /// Smallest gap between distinct cluster energies, if there are two or
    /// more clusters.
    pub fn min_gap(&self) -> Option<f64> {
        self.energies
            .windows(2)
            .map(|w| w[1] - w[0])
            .min_by(|a, b| a.total_cmp(b))
    }
}

/// Greedy clustering of the ascending spectrum: neighbours whose gap is at
/// most `cluster_tol` share a cluster.
pub fn energy_blocks(h: &Hamiltonian, cluster_tol: f64) -> EnergyBlocks {
    assert!(cluster_tol > 0.0, "cluster_tol must be positive");
    let e = &h.eig.eigenvalues;
    let mut clusters: Vec<Vec<usize>> = vec![vec![0]];
    for j in 1..e.len() {
        if e[j] - e[j - 1] <= cluster_tol {
            clusters.last_mut().expect("non-empty").push(j);
        } else {
            clusters.push(vec![j]);
        }
    }
    let v = &h.eig.eigenvectors;
    let projectors = clusters
        .iter()
        .map(|cluster| {
            let mut pi = ComplexMatrix::zeros(h.dim());
            for &j in cluster {
                pi = pi
                    .add(&ComplexMatrix::outer(&v.column(j)).expect("finite"))
                    .expect("same dim");
            }
            pi
        })
        .collect();
    let energies = clusters
        .iter()
        .map(|c| c.iter().map(|&j| e[j]).sum::<f64>() / c.len() as f64)
        .collect();
    EnergyBlocks {
        clusters,
        energies,
        projectors,
    }
}

/// `U(t) ρ U(t)†`.
pub fn evolve(rho: &DensityMatrix, h: &Hamiltonian, t: f64) -> Result<DensityMatrix> {
    rho.matrix().check_dim(h.matrix())?;
    let u = h.propagator(t);
    let out = u.mul(rho.matrix()).mul(&u.adjoint());
    Ok(DensityMatrix::trusted(out.hermitian_part()))
}

/// Infinite-time average of [`evolve`], using the default cluster tolerance.
pub fn dephase(rho: &DensityMatrix, h: &Hamiltonian) -> Result<DensityMatrix> {
    dephase_with(rho, &h.energy_blocks())
}

pub fn dephase_with(rho: &DensityMatrix, blocks: &EnergyBlocks) -> Result<DensityMatrix> {
    let out = blocks.pinch(rho.matrix())?;
    Ok(DensityMatrix::trusted(out.hermitian_part()))
}

/// Whether `p` is block-diagonal across the energy blocks of `h`.
pub fn is_superselection_compliant(p: &Projector, h: &Hamiltonian) -> Result<bool> {
    if p.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: p.dim(),
        });
    }
    let blocks = h.energy_blocks();
    let pinched = blocks.pinch(p.matrix())?;
    Ok(pinched.max_abs_diff(p.matrix())? <= COMPLIANCE_TOL)
}
