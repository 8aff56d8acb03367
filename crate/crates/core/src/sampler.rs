//! Seeded Monte Carlo sampling of perceptions.
//!
//! Classical runs draw a uniform time in one period and record the occupied
//! state. Quantum runs draw an outcome of a projective partition by inverse
//! CDF over the trace-rule weights. The generator is `ChaCha8Rng` seeded with
//! `seed_from_u64`, so a given seed reproduces the same report bit for bit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classical::{dwell_fractions, ClassicalCycle};
use crate::error::{Error, Result};
use crate::matcore::ComplexMatrix;
use crate::quantum::{trace_prob, DensityMatrix, Projector};

/// Partition tolerance for `ΣP_k = I` and `P_j P_k = 0`, and for the weight
/// sum before renormalization.
pub const PARTITION_TOL: f64 = 1e-9;

/// Default acceptance multiplier.
pub const DEFAULT_SIGMA: f64 = 5.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleReport {
    pub outcome_counts: Vec<u64>,
    pub total: u64,
    pub empirical_freqs: Vec<f64>,
    pub expected_probs: Vec<f64>,
    pub max_abs_deviation: f64,
    pub seed: u64,
}

impl SampleReport {
    fn from_counts(counts: Vec<u64>, expected: Vec<f64>, seed: u64) -> Self {
        let total: u64 = counts.iter().sum();
        let empirical: Vec<f64> = counts.iter().map(|&c| c as f64 / total as f64).collect();
        let max_abs_deviation = empirical
            .iter()
            .zip(&expected)
            .map(|(e, p)| (e - p).abs())
            .fold(0.0, f64::max);
        Self {
            outcome_counts: counts,
            total,
            empirical_freqs: empirical,
            expected_probs: expected,
            max_abs_deviation,
            seed,
        }
    }
}

/// Samples states of `c` with weight proportional to time spent in them.
pub fn sample_classical(c: &ClassicalCycle, n_samples: u64, seed: u64) -> SampleReport {
    assert!(n_samples >= 1, "n_samples must be >= 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; c.n()];
    let period = c.period();
    for _ in 0..n_samples {
        let t = rng.random::<f64>() * period;
        counts[c.state_at(t) - 1] += 1;
    }
    SampleReport::from_counts(counts, dwell_fractions(c).as_slice().to_vec(), seed)
}

/// Checks that `partition` is a complete family of orthogonal projectors.
pub fn check_partition(partition: &[Projector]) -> Result<()> {
    let Some(first) = partition.first() else {
        return Err(Error::NotAPartition("no projectors".into()));
    };
    let dim = first.dim();
    if let Some(p) = partition.iter().find(|p| p.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: p.dim(),
        });
    }
    let mut sum = ComplexMatrix::zeros(dim);
    for p in partition {
        sum = sum.add(p.matrix())?;
    }
    let completeness = sum.max_abs_diff(&ComplexMatrix::identity(dim))?;
    if completeness > PARTITION_TOL {
        return Err(Error::NotAPartition(format!(
            "sum differs from identity by {completeness:.3e}"
        )));
    }
    for (j, p) in partition.iter().enumerate() {
        for (k, q) in partition.iter().enumerate().skip(j + 1) {
            let overlap = p.matrix().mat_mul(q.matrix())?.max_abs();
            if overlap > PARTITION_TOL {
                return Err(Error::NotAPartition(format!(
                    "outcomes {} and {} overlap ({overlap:.3e})",
                    j + 1,
                    k + 1
                )));
            }
        }
    }
    Ok(())
}

/// Samples outcomes of the projective partition in state `rho`.
pub fn sample_measurement(
    partition: &[Projector],
    rho: &DensityMatrix,
    n_samples: u64,
    seed: u64,
) -> Result<SampleReport> {
    assert!(n_samples >= 1, "n_samples must be >= 1");
    check_partition(partition)?;
    let weights = partition
        .iter()
        .map(|p| trace_prob(p, rho))
        .collect::<Result<Vec<_>>>()?;
    let cdf = cumulative(&weights)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; partition.len()];
    let last = partition.len() - 1;
    for _ in 0..n_samples {
        let u: f64 = rng.random();
        let k = cdf.partition_point(|&c| c <= u).min(last);
        counts[k] += 1;
    }
    Ok(SampleReport::from_counts(counts, weights, seed))
}

/// Cumulative weights after clamping at zero and renormalizing. The raw sum
/// must already be within [`PARTITION_TOL`] of 1.
fn cumulative(weights: &[f64]) -> Result<Vec<f64>> {
    let clamped: Vec<f64> = weights.iter().map(|w| w.max(0.0)).collect();
    let sum: f64 = clamped.iter().sum();
    if (sum - 1.0).abs() > PARTITION_TOL {
        return Err(Error::NumericalIntegrity(format!(
            "outcome weights sum to {sum}"
        )));
    }
    let mut acc = 0.0;
    let mut cdf: Vec<f64> = clamped
        .iter()
        .map(|w| {
            acc += w / sum;
            acc
        })
        .collect();
    if let Some(last) = cdf.last_mut() {
        *last = 1.0;
    }
    Ok(cdf)
}

/// Every outcome within `k·√(p(1−p)/N) + 1/N` of its expected probability.
pub fn deviation_check(report: &SampleReport, sigma_multiplier: f64) -> bool {
    assert!(sigma_multiplier > 0.0, "sigma_multiplier must be positive");
    let n = report.total as f64;
    report
        .empirical_freqs
        .iter()
        .zip(&report.expected_probs)
        .all(|(&freq, &p)| {
            let sigma = (p * (1.0 - p) / n).max(0.0).sqrt();
            (freq - p).abs() <= sigma_multiplier * sigma + 1.0 / n
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag_proj(d: &[f64]) -> Projector {
        Projector::new(ComplexMatrix::from_real_diag(d).unwrap()).unwrap()
    }

    fn plus_state() -> DensityMatrix {
        DensityMatrix::new(
            ComplexMatrix::from_real_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn single_state_cycle() {
        let c = ClassicalCycle::new(1, vec![(1, 2.5)]).unwrap();
        let r = sample_classical(&c, 1000, 3);
        assert_eq!(r.outcome_counts, vec![1000]);
        assert_eq!(r.max_abs_deviation, 0.0);
    }

    #[test]
    fn classical_three_to_one() {
        let c = ClassicalCycle::new(2, vec![(1, 3.0), (2, 1.0)]).unwrap();
        let r = sample_classical(&c, 1_000_000, 11);
        let bound = 5.0 * (0.75f64 * 0.25 / 1e6).sqrt();
        assert!((r.empirical_freqs[0] - 0.75).abs() <= bound);
        assert_eq!(r, sample_classical(&c, 1_000_000, 11));
    }

    #[test]
    fn trivial_partition() {
        let r = sample_measurement(&[Projector::identity(2)], &plus_state(), 500, 1).unwrap();
        assert_eq!(r.outcome_counts, vec![500]);
        assert!(deviation_check(&r, DEFAULT_SIGMA));
    }

    #[test]
    fn symmetric_state_splits_evenly() {
        let partition = [diag_proj(&[1.0, 0.0]), diag_proj(&[0.0, 1.0])];
        let r = sample_measurement(&partition, &plus_state(), 1_000_000, 5).unwrap();
        for f in &r.empirical_freqs {
            assert!((f - 0.5).abs() <= 0.0025);
        }
    }

    #[test]
    fn partition_errors() {
        let rho = plus_state();
        assert!(matches!(
            sample_measurement(&[diag_proj(&[1.0, 0.0])], &rho, 10, 0),
            Err(Error::NotAPartition(_))
        ));
        assert!(matches!(
            sample_measurement(
                &[Projector::identity(2), diag_proj(&[1.0, 0.0])],
                &rho,
                10,
                0
            ),
            Err(Error::NotAPartition(_))
        ));
        assert!(matches!(
            sample_measurement(&[], &rho, 10, 0),
            Err(Error::NotAPartition(_))
        ));
    }

    #[test]
    fn deviation_examples() {
        let exact = SampleReport::from_counts(vec![500, 500], vec![0.5, 0.5], 0);
        assert!(deviation_check(&exact, 5.0));
        let off = SampleReport::from_counts(vec![900_000, 100_000], vec![0.5, 0.5], 0);
        assert!(!deviation_check(&off, 5.0));
    }

    #[test]
    fn deviation_sweep_mostly_passes() {
        let c = ClassicalCycle::new(3, vec![(1, 1.0), (2, 2.0), (3, 0.5)]).unwrap();
        let passes = (0..50)
            .filter(|&seed| deviation_check(&sample_classical(&c, 20_000, seed), 5.0))
            .count();
        assert!(passes >= 49);
    }

    #[test]
    fn report_json_round_trip() {
        let c = ClassicalCycle::new(3, vec![(1, 1.0), (2, 2.0), (3, 0.7)]).unwrap();
        let r = sample_classical(&c, 1234, 9);
        let s = serde_json::to_string(&r).unwrap();
        let back: SampleReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }
}
