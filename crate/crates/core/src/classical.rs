//! Deterministic cyclic systems and the classical probability rule.
//!
//! A [`ClassicalCycle`] is a periodic schedule of states. The fraction of the
//! period spent in each state is its probability weight; a perception set is
//! a 0/1 characteristic vector and its probability is `χ·f`. Lifting both to
//! diagonal matrices gives the same number as `tr(P(S) ρ)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::ComplexMatrix;

const FRACTION_SUM_TOL: f64 = 1e-9;

/// One schedule entry: a 1-based state label and how long it lasts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dwell {
    pub state: usize,
    pub duration: f64,
}

/// Periodic piecewise-constant trajectory over states `1..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalCycle {
    n: usize,
    schedule: Vec<Dwell>,
    // Cumulative end time of each dwell.
    ends: Vec<f64>,
    period: f64,
}

impl ClassicalCycle {
    /// `schedule` holds `(state, duration)` pairs with 1-based states. Every
    /// state in `1..=n` must appear, and durations must be finite and
    /// positive. A state may be visited more than once per period.
    pub fn new(n: usize, schedule: Vec<(usize, f64)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidCycle("state count must be >= 1".into()));
        }
        if schedule.is_empty() {
            return Err(Error::InvalidCycle("schedule is empty".into()));
        }
        let mut seen = vec![false; n];
        let mut ends = Vec::with_capacity(schedule.len());
        let mut acc = 0.0;
        for &(state, duration) in &schedule {
            if state == 0 || state > n {
                return Err(Error::InvalidCycle(format!(
                    "state {state} outside 1..={n}"
                )));
            }
            if !(duration.is_finite() && duration > 0.0) {
                return Err(Error::InvalidCycle(format!(
                    "duration {duration} for state {state} is not positive"
                )));
            }
            seen[state - 1] = true;
            acc += duration;
            ends.push(acc);
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidCycle(format!(
                "state {} never appears in the schedule",
                missing + 1
            )));
        }
        if !acc.is_finite() {
            return Err(Error::InvalidCycle("period is not finite".into()));
        }
        Ok(Self {
            n,
            schedule: schedule
                .into_iter()
                .map(|(state, duration)| Dwell { state, duration })
                .collect(),
            ends,
            period: acc,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn schedule(&self) -> &[Dwell] {
        &self.schedule
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// 1-based state occupied at time `t` (taken modulo the period). Dwell
    /// intervals are half-open, so a boundary time belongs to the next dwell.
    pub fn state_at(&self, t: f64) -> usize {
        let mut tau = t.rem_euclid(self.period);
        if tau >= self.period {
            tau = 0.0;
        }
        let idx = self.ends.partition_point(|&end| end <= tau);
        self.schedule[idx.min(self.schedule.len() - 1)].state
    }
}

/// Subset of `n` perception labels as a characteristic vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PerceptionSet {
    chi: Vec<bool>,
}

impl PerceptionSet {
    /// From a 0/1 vector; any other entry is rejected.
    pub fn from_chi(chi: &[u8]) -> Result<Self> {
        if chi.is_empty() {
            return Err(Error::InvalidSet("characteristic vector is empty".into()));
        }
        chi.iter()
            .map(|&x| match x {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(Error::InvalidSet(format!("entry {other} is not 0 or 1"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(|chi| Self { chi })
    }

    /// From 1-based member labels.
    pub fn from_members(n: usize, members: &[usize]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSet("dimension must be >= 1".into()));
        }
        let mut chi = vec![false; n];
        for &m in members {
            if m == 0 || m > n {
                return Err(Error::InvalidSet(format!("member {m} outside 1..={n}")));
            }
            chi[m - 1] = true;
        }
        Ok(Self { chi })
    }

    pub fn empty(n: usize) -> Self {
        Self {
            chi: vec![false; n],
        }
    }

    pub fn full(n: usize) -> Self {
        Self { chi: vec![true; n] }
    }

    pub fn n(&self) -> usize {
        self.chi.len()
    }

    pub fn contains(&self, label: usize) -> bool {
        label >= 1 && label <= self.chi.len() && self.chi[label - 1]
    }

    pub fn chi(&self) -> Vec<u8> {
        self.chi.iter().map(|&b| b as u8).collect()
    }

    /// 1-based members in ascending order.
    pub fn members(&self) -> Vec<usize> {
        self.chi
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i + 1))
            .collect()
    }
}

/// Probability weights over `n` states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct FractionVector {
    f: Vec<f64>,
}

impl FractionVector {
    /// Accepts nonnegative finite weights summing to 1 within 1e-9. No
    /// renormalization happens here; see [`FractionVector::normalize`].
    pub fn new(f: Vec<f64>) -> Result<Self> {
        Self::check_entries(&f)?;
        let sum: f64 = f.iter().sum();
        if (sum - 1.0).abs() > FRACTION_SUM_TOL {
            return Err(Error::InvalidFractions(format!(
                "entries sum to {sum}, not 1"
            )));
        }
        Ok(Self { f })
    }

    /// Scales nonnegative weights to unit sum.
    pub fn normalize(weights: Vec<f64>) -> Result<Self> {
        Self::check_entries(&weights)?;
        let sum: f64 = weights.iter().sum();
        if !(sum > 0.0 && sum.is_finite()) {
            return Err(Error::InvalidFractions(format!(
                "cannot normalize weights with sum {sum}"
            )));
        }
        Ok(Self {
            f: weights.into_iter().map(|w| w / sum).collect(),
        })
    }

    fn check_entries(f: &[f64]) -> Result<()> {
        if f.is_empty() {
            return Err(Error::InvalidFractions("vector is empty".into()));
        }
        if let Some(bad) = f.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
            return Err(Error::InvalidFractions(format!(
                "entry {bad} is negative or non-finite"
            )));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.f.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.f
    }
}

impl TryFrom<Vec<f64>> for FractionVector {
    type Error = Error;

    fn try_from(f: Vec<f64>) -> Result<Self> {
        Self::new(f)
    }
}

impl From<FractionVector> for Vec<f64> {
    fn from(v: FractionVector) -> Self {
        v.f
    }
}

fn check_n(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Members common to both sets.
pub fn char_and(s: &PerceptionSet, s2: &PerceptionSet) -> Result<PerceptionSet> {
    check_n(s.n(), s2.n())?;
    Ok(PerceptionSet {
        chi: s.chi.iter().zip(&s2.chi).map(|(&a, &b)| a && b).collect(),
    })
}

/// Members in either set.
pub fn char_or(s: &PerceptionSet, s2: &PerceptionSet) -> Result<PerceptionSet> {
    check_n(s.n(), s2.n())?;
    Ok(PerceptionSet {
        chi: s.chi.iter().zip(&s2.chi).map(|(&a, &b)| a || b).collect(),
    })
}

/// `χ·f`.
pub fn classical_prob(s: &PerceptionSet, f: &FractionVector) -> Result<f64> {
    check_n(s.n(), f.n())?;
    let p: f64 = s
        .chi
        .iter()
        .zip(&f.f)
        .filter_map(|(&member, &w)| member.then_some(w))
        .sum();
    Ok(p.clamp(0.0, 1.0))
}

/// `diag(χ_1, …, χ_n)`.
pub fn diag_projector(s: &PerceptionSet) -> ComplexMatrix {
    let d: Vec<f64> = s.chi.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
    ComplexMatrix::from_real_diag(&d).expect("0/1 entries")
}

/// `diag(f_1, …, f_n)`.
pub fn classical_density(f: &FractionVector) -> ComplexMatrix {
    ComplexMatrix::from_real_diag(&f.f).expect("validated fractions")
}

/// `R(t)`: a single 1 on the diagonal at the state occupied at time `t`.
pub fn indicator_matrix(c: &ClassicalCycle, t: f64) -> ComplexMatrix {
    let mut d = vec![0.0; c.n];
    d[c.state_at(t) - 1] = 1.0;
    ComplexMatrix::from_real_diag(&d).expect("0/1 entries")
}

/// Midpoint Riemann sum `(1/steps) Σ_k R(t_k)` with `t_k = (k + ½)T/steps`.
pub fn time_average_indicator(c: &ClassicalCycle, steps: usize) -> ComplexMatrix {
    assert!(steps >= 1, "steps must be >= 1");
    let mut counts = vec![0u64; c.n];
    let dt = c.period / steps as f64;
    // Sample times increase, so the dwell cursor only moves forward.
    let mut cursor = 0;
    for k in 0..steps {
        let t = (k as f64 + 0.5) * dt;
        while cursor + 1 < c.ends.len() && c.ends[cursor] <= t {
            cursor += 1;
        }
        counts[c.schedule[cursor].state - 1] += 1;
    }
    let d: Vec<f64> = counts.iter().map(|&k| k as f64 / steps as f64).collect();
    ComplexMatrix::from_real_diag(&d).expect("finite")
}

/// Total dwell of each state divided by the period.
pub fn dwell_fractions(c: &ClassicalCycle) -> FractionVector {
    let mut totals = vec![0.0; c.n];
    for d in &c.schedule {
        totals[d.state - 1] += d.duration;
    }
    FractionVector {
        f: totals.into_iter().map(|x| x / c.period).collect(),
    }
}

/// File form of a cycle: `{"n": int, "schedule": [[state, duration], ...]}`
/// with 1-based states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CycleFile {
    pub n: usize,
    pub schedule: Vec<(usize, f64)>,
}

impl TryFrom<CycleFile> for ClassicalCycle {
    type Error = Error;

    fn try_from(file: CycleFile) -> Result<Self> {
        ClassicalCycle::new(file.n, file.schedule)
    }
}

impl From<&ClassicalCycle> for CycleFile {
    fn from(c: &ClassicalCycle) -> Self {
        CycleFile {
            n: c.n,
            schedule: c.schedule.iter().map(|d| (d.state, d.duration)).collect(),
        }
    }
}

impl Serialize for ClassicalCycle {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        CycleFile::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ClassicalCycle {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let file = CycleFile::deserialize(deserializer)?;
        ClassicalCycle::try_from(file).map_err(serde::de::Error::custom)
    }
}
