#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tracerule::classical::{ClassicalCycle, PerceptionSet};
use tracerule::matcore::random::{
    projector_onto_columns, random_density_in, random_projector_in, random_unitary_in,
};
use tracerule::matcore::{Complex64, ComplexMatrix};
use tracerule::measure::{PerceptionAlgebra, PovOperator};
use tracerule::quantum::{DensityMatrix, Projector, RealityMode};
use tracerule::superselect::Hamiltonian;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Cycle over `n` states: a shuffled visit of every state, plus up to `n`
/// extra revisits, with durations in `[0.1, 3)`.
pub fn random_cycle(n: usize, seed: u64) -> ClassicalCycle {
    let mut r = rng(seed);
    let mut states: Vec<usize> = (1..=n).collect();
    let extra = r.random_range(0..=n);
    for _ in 0..extra {
        states.push(r.random_range(1..=n));
    }
    states.shuffle(&mut r);
    let schedule = states
        .into_iter()
        .map(|s| (s, r.random_range(0.1..3.0)))
        .collect();
    ClassicalCycle::new(n, schedule).unwrap()
}

pub fn random_set(n: usize, seed: u64) -> PerceptionSet {
    let mut r = rng(seed);
    let chi: Vec<u8> = (0..n).map(|_| r.random_range(0..=1u8)).collect();
    PerceptionSet::from_chi(&chi).unwrap()
}

pub fn all_sets(n: usize) -> Vec<PerceptionSet> {
    (0..1u32 << n)
        .map(|mask| {
            let chi: Vec<u8> = (0..n).map(|i| ((mask >> i) & 1) as u8).collect();
            PerceptionSet::from_chi(&chi).unwrap()
        })
        .collect()
}

pub fn projector(mode: RealityMode, dim: usize, seed: u64) -> Projector {
    Projector::new_in(mode, random_projector_in(mode, dim, seed)).unwrap()
}

pub fn density(mode: RealityMode, dim: usize, seed: u64) -> DensityMatrix {
    DensityMatrix::new_in(mode, random_density_in(mode, dim, seed)).unwrap()
}

pub fn unitary(mode: RealityMode, dim: usize, seed: u64) -> ComplexMatrix {
    random_unitary_in(mode, dim, seed)
}

/// Hamiltonian `U diag(E) U†` with `E_j ∈ {0, 0.5, …, 4}`, so degeneracies
/// occur and every distinct gap is at least 0.5.
pub fn lattice_hamiltonian(mode: RealityMode, dim: usize, seed: u64) -> Hamiltonian {
    let mut r = rng(seed);
    let energies: Vec<f64> = (0..dim)
        .map(|_| 0.5 * r.random_range(0..=8u32) as f64)
        .collect();
    let u = random_unitary_in(mode, dim, seed ^ 0x5eed);
    let d = ComplexMatrix::from_real_diag(&energies).unwrap();
    let h = u.mat_mul(&d).unwrap().mat_mul(&u.adjoint()).unwrap();
    Hamiltonian::new_in(mode, hermitize(&h)).unwrap()
}

pub fn hermitize(a: &ComplexMatrix) -> ComplexMatrix {
    a.add(&a.adjoint()).unwrap().scale_real(0.5)
}

/// Projector that is block-diagonal across the energy blocks of `h`: a random
/// union of whole blocks plus random sub-projectors inside degenerate
/// blocks.
pub fn compliant_projector(mode: RealityMode, h: &Hamiltonian, seed: u64) -> Projector {
    let mut r = rng(seed);
    let blocks = h.energy_blocks();
    let v = &h.eigen().eigenvectors;
    let n = h.dim();
    let mut p = ComplexMatrix::zeros(n);
    for (k, cluster) in blocks.clusters.iter().enumerate() {
        let choice = r.random_range(0..3u32);
        if choice == 0 {
            p = p.add(&blocks.projectors[k]).unwrap();
        } else if choice == 1 && cluster.len() > 1 {
            // Rotate within the degenerate block and keep a subset of columns.
            let m = cluster.len();
            let w = random_unitary_in(mode, m, r.random());
            let mut rows = vec![vec![Complex64::new(0.0, 0.0); n]; n];
            for (row, out) in rows.iter_mut().enumerate() {
                for (a, cell) in out.iter_mut().take(m).enumerate() {
                    for (b, &jb) in cluster.iter().enumerate() {
                        *cell += v.get(row, jb) * w.get(b, a);
                    }
                }
            }
            let basis = ComplexMatrix::from_rows(rows).unwrap();
            let keep = r.random_range(1..m);
            let sub = projector_onto_columns(&basis, &(0..keep).collect::<Vec<_>>());
            p = p.add(&sub).unwrap();
        }
    }
    Projector::new_in(mode, hermitize(&p)).unwrap()
}

/// Positive operator `c·G G†/n` with Gaussian `G` and random scale `c`.
pub fn random_pov(mode: RealityMode, dim: usize, seed: u64) -> PovOperator {
    let mut r = rng(seed);
    let data: Vec<Complex64> = (0..dim * dim)
        .map(|_| {
            let re: f64 = r.sample(rand_distr::StandardNormal);
            let im: f64 = match mode {
                RealityMode::Complex => r.sample(rand_distr::StandardNormal),
                RealityMode::Real => 0.0,
            };
            Complex64::new(re, im)
        })
        .collect();
    let g = ComplexMatrix::from_vec(dim, data).unwrap();
    let scale = r.random_range(0.1..2.0) / dim as f64;
    let a = g.mat_mul(&g.adjoint()).unwrap().scale_real(scale);
    PovOperator::new_in(mode, hermitize(&a)).unwrap()
}

pub fn random_algebra(mode: RealityMode, atoms: usize, dim: usize, seed: u64) -> PerceptionAlgebra {
    PerceptionAlgebra::new(
        (0..atoms)
            .map(|i| {
                (
                    format!("a{i}"),
                    random_pov(mode, dim, seed.wrapping_mul(97).wrapping_add(i as u64)),
                )
            })
            .collect(),
    )
    .unwrap()
}

/// Splits the columns of a random unitary into `parts` nonempty groups and
/// returns the group projectors, which sum to the identity.
pub fn random_partition(mode: RealityMode, dim: usize, parts: usize, seed: u64) -> Vec<Projector> {
    assert!(parts >= 1 && parts <= dim);
    let mut r = rng(seed);
    let u = random_unitary_in(mode, dim, seed ^ 0xabcd);
    let mut cols: Vec<usize> = (0..dim).collect();
    cols.shuffle(&mut r);
    let mut groups: Vec<Vec<usize>> = cols[..parts].iter().map(|&c| vec![c]).collect();
    for &c in &cols[parts..] {
        let g = r.random_range(0..parts);
        groups[g].push(c);
    }
    groups
        .iter()
        .map(|g| Projector::new_in(mode, projector_onto_columns(&u, g)).unwrap())
        .collect()
}

/// Subsets of atom labels as 0/1 masks.
pub fn labels_of(mask: u32, atoms: usize) -> Vec<String> {
    (0..atoms)
        .filter(|i| mask & (1 << i) != 0)
        .map(|i| format!("a{i}"))
        .collect()
}

/// Entry-by-entry triple loop.
pub fn naive_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let n = a.dim();
    let mut rows = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for (i, row) in rows.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            for k in 0..n {
                *cell += a.get(i, k) * b.get(k, j);
            }
        }
    }
    ComplexMatrix::from_rows(rows).unwrap()
}

/// General (not Hermitian) Gaussian matrix.
pub fn gaussian_matrix(dim: usize, seed: u64) -> ComplexMatrix {
    let mut r = rng(seed);
    let data = (0..dim * dim)
        .map(|_| {
            Complex64::new(
                r.sample(rand_distr::StandardNormal),
                r.sample(rand_distr::StandardNormal),
            )
        })
        .collect();
    ComplexMatrix::from_vec(dim, data).unwrap()
}

/// Numeric long-time average of `evolve(rho, h, t)` over `samples` jittered
/// stratified times in `[0, window)`.
pub fn long_time_average(
    rho: &DensityMatrix,
    h: &Hamiltonian,
    window: f64,
    samples: usize,
    seed: u64,
) -> ComplexMatrix {
    let mut r = rng(seed);
    let n = rho.dim();
    let mut acc = ComplexMatrix::zeros(n);
    let width = window / samples as f64;
    for m in 0..samples {
        let t = (m as f64 + r.random::<f64>()) * width;
        let evolved = tracerule::superselect::evolve(rho, h, t).unwrap();
        acc = acc.add(evolved.matrix()).unwrap();
    }
    acc.scale_real(1.0 / samples as f64)
}
