mod common;

use tracerule::classical::{classical_density, diag_projector, dwell_fractions, PerceptionSet};
use tracerule::quantum::{DensityMatrix, Projector, RealityMode};
use tracerule::sampler::{deviation_check, sample_classical, sample_measurement};

use common::*;

#[test]
fn classical_and_embedded_sampling_agree() {
    for seed in 0..5 {
        let n = 3 + seed as usize;
        let c = random_cycle(n, seed);
        let rho = DensityMatrix::new(classical_density(&dwell_fractions(&c))).unwrap();
        let basis: Vec<Projector> = (1..=n)
            .map(|i| {
                Projector::new(diag_projector(
                    &PerceptionSet::from_members(n, &[i]).unwrap(),
                ))
                .unwrap()
            })
            .collect();
        let n_samples = 200_000u64;
        let direct = sample_classical(&c, n_samples, seed);
        let embedded = sample_measurement(&basis, &rho, n_samples, seed + 1000).unwrap();
        for k in 0..n {
            let p = direct.expected_probs[k];
            assert!((p - embedded.expected_probs[k]).abs() <= 1e-12);
            // Difference of two independent estimates: variance adds.
            let sigma = (2.0 * p * (1.0 - p) / n_samples as f64).sqrt();
            let gap = (direct.empirical_freqs[k] - embedded.empirical_freqs[k]).abs();
            assert!(
                gap <= 5.0 * sigma + 2.0 / n_samples as f64,
                "seed {seed} outcome {k}"
            );
        }
    }
}

#[test]
fn quantum_partition_sampling() {
    for seed in 0..5 {
        let parts = random_partition(RealityMode::Complex, 4, 4, seed);
        let rho = density(RealityMode::Complex, 4, seed + 10);
        let report = sample_measurement(&parts, &rho, 200_000, seed).unwrap();
        let weight_sum: f64 = report.expected_probs.iter().sum();
        assert!((weight_sum - 1.0).abs() <= 1e-9);
        assert!(deviation_check(&report, 5.0));
        assert_eq!(report.outcome_counts.iter().sum::<u64>(), report.total);
    }
}

#[test]
fn reports_are_bit_identical_per_seed() {
    let c = random_cycle(6, 3);
    let a = serde_json::to_string(&sample_classical(&c, 50_000, 42)).unwrap();
    let b = serde_json::to_string(&sample_classical(&c, 50_000, 42)).unwrap();
    assert_eq!(a, b);
    let parts = random_partition(RealityMode::Real, 5, 3, 1);
    let rho = density(RealityMode::Real, 5, 2);
    let a = sample_measurement(&parts, &rho, 50_000, 7).unwrap();
    let b = sample_measurement(&parts, &rho, 50_000, 7).unwrap();
    assert_eq!(a, b);
}
