//! Positive-operator measures over finite perception algebras.
//!
//! Each atom carries a positive semidefinite operator; a set of atoms maps to
//! the sum of its atoms' operators, so measures are additive over disjoint
//! sets by construction. Operators need not be projectors, need not sum to
//! the identity, and the total measure may exceed 1.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{hermitian_defect, min_eigenvalue, ComplexMatrix, DEFAULT_TOL};
use crate::quantum::{enforce_reality, trace_of_product, DensityMatrix, RealityMode, PROB_SLACK};

/// Measures at or below this value cannot be normalized or conditioned on.
pub const ZERO_MEASURE: f64 = 1e-12;

/// Positive semidefinite Hermitian operator.
#[derive(Debug, Clone, PartialEq)]
pub struct PovOperator {
    mat: ComplexMatrix,
}

impl PovOperator {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        Self::new_in(RealityMode::Complex, mat)
    }

    pub fn new_in(mode: RealityMode, mat: ComplexMatrix) -> Result<Self> {
        let mat = enforce_reality(mode, &mat)?;
        let scale = mat.max_abs().max(1.0);
        let defect = hermitian_defect(&mat);
        if defect > DEFAULT_TOL * scale {
            return Err(Error::NotHermitian { defect });
        }
        let min_eigenvalue = min_eigenvalue(&mat);
        if min_eigenvalue < -DEFAULT_TOL * scale {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(Self { mat })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            mat: ComplexMatrix::zeros(dim),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }
}

/// Nonnegative, possibly unnormalized, measure of a set.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MeasureValue(pub f64);

impl MeasureValue {
    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub label: String,
    pub operator: PovOperator,
}

/// Finite collection of labeled atoms, each with a positive operator.
#[derive(Debug, Clone, PartialEq)]
pub struct PerceptionAlgebra {
    dim: usize,
    atoms: Vec<Atom>,
}

impl PerceptionAlgebra {
    /// Requires at least one atom, unique labels and equal dimensions.
    pub fn new(atoms: Vec<(String, PovOperator)>) -> Result<Self> {
        let Some(first) = atoms.first() else {
            return Err(Error::Validation("algebra has no atoms".into()));
        };
        let dim = first.1.dim();
        let mut seen = BTreeSet::new();
        for (label, op) in &atoms {
            if !seen.insert(label.as_str()) {
                return Err(Error::DuplicateLabel(label.clone()));
            }
            if op.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: op.dim(),
                });
            }
        }
        Ok(Self {
            dim,
            atoms: atoms
                .into_iter()
                .map(|(label, operator)| Atom { label, operator })
                .collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn labels(&self) -> Vec<&str> {
        self.atoms.iter().map(|a| a.label.as_str()).collect()
    }

    fn resolve<S: AsRef<str>>(&self, set: &[S]) -> Result<BTreeSet<usize>> {
        set.iter()
            .map(|label| {
                let label = label.as_ref();
                self.atoms
                    .iter()
                    .position(|a| a.label == label)
                    .ok_or_else(|| Error::UnknownLabel(label.to_string()))
            })
            .collect()
    }

    fn operator_of(&self, indices: &BTreeSet<usize>) -> ComplexMatrix {
        let mut acc = ComplexMatrix::zeros(self.dim);
        for &i in indices {
            acc = acc.add(self.atoms[i].operator.matrix()).expect("same dim");
        }
        acc
    }

    fn measure_of_indices(
        &self,
        indices: &BTreeSet<usize>,
        rho: &DensityMatrix,
    ) -> Result<MeasureValue> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: rho.dim(),
            });
        }
        let op = self.operator_of(indices);
        let value = trace_of_product(&op, rho.matrix()).re;
        if !value.is_finite() {
            return Err(Error::NonFinite);
        }
        if value < -DEFAULT_TOL {
            return Err(Error::NumericalIntegrity(format!(
                "negative measure {value}"
            )));
        }
        Ok(MeasureValue(value.max(0.0)))
    }
}

/// Sum of the atoms' operators; the empty set maps to zero.
pub fn union_operator<S: AsRef<str>>(alg: &PerceptionAlgebra, s: &[S]) -> Result<PovOperator> {
    let indices = alg.resolve(s)?;
    Ok(PovOperator {
        mat: alg.operator_of(&indices),
    })
}

/// `Re tr(P(S) ρ)`, clamped at 0.
pub fn measure_of<S: AsRef<str>>(
    alg: &PerceptionAlgebra,
    s: &[S],
    rho: &DensityMatrix,
) -> Result<MeasureValue> {
    let indices = alg.resolve(s)?;
    alg.measure_of_indices(&indices, rho)
}

/// Measure of the union of all atoms.
pub fn total_measure(alg: &PerceptionAlgebra, rho: &DensityMatrix) -> Result<MeasureValue> {
    let all: BTreeSet<usize> = (0..alg.atoms.len()).collect();
    alg.measure_of_indices(&all, rho)
}

/// `f(S)/f(M)`.
pub fn normalized_prob<S: AsRef<str>>(
    alg: &PerceptionAlgebra,
    s: &[S],
    rho: &DensityMatrix,
) -> Result<f64> {
    let total = total_measure(alg, rho)?.0;
    if total <= ZERO_MEASURE {
        return Err(Error::ZeroTotalMeasure(total));
    }
    let part = measure_of(alg, s, rho)?.0;
    ratio(part, total)
}

/// `f(S')/f(M')` for `S' ⊆ M'`.
pub fn conditional_prob<S: AsRef<str>, M: AsRef<str>>(
    alg: &PerceptionAlgebra,
    s_sub: &[S],
    m_sub: &[M],
    rho: &DensityMatrix,
) -> Result<f64> {
    let s_idx = alg.resolve(s_sub)?;
    let m_idx = alg.resolve(m_sub)?;
    if let Some(&outside) = s_idx.difference(&m_idx).next() {
        return Err(Error::NotSubset(alg.atoms[outside].label.clone()));
    }
    let cond = alg.measure_of_indices(&m_idx, rho)?.0;
    if cond <= ZERO_MEASURE {
        return Err(Error::ZeroConditionMeasure(cond));
    }
    let part = alg.measure_of_indices(&s_idx, rho)?.0;
    ratio(part, cond)
}

fn ratio(part: f64, whole: f64) -> Result<f64> {
    let r = part / whole;
    if !r.is_finite() {
        return Err(Error::NonFinite);
    }
    if r > 1.0 + PROB_SLACK {
        return Err(Error::NumericalIntegrity(format!(
            "probability {r} exceeds 1"
        )));
    }
    Ok(r.clamp(0.0, 1.0))
}

/// `{"atoms": [{"label": string, "operator": matrix}, ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub atoms: Vec<AtomFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomFile {
    pub label: String,
    pub operator: ComplexMatrix,
}

impl AlgebraFile {
    pub fn into_algebra(self, mode: RealityMode) -> Result<PerceptionAlgebra> {
        let atoms = self
            .atoms
            .into_iter()
            .map(|a| Ok((a.label, PovOperator::new_in(mode, a.operator)?)))
            .collect::<Result<Vec<_>>>()?;
        PerceptionAlgebra::new(atoms)
    }
}

impl From<&PerceptionAlgebra> for AlgebraFile {
    fn from(alg: &PerceptionAlgebra) -> Self {
        AlgebraFile {
            atoms: alg
                .atoms
                .iter()
                .map(|a| AtomFile {
                    label: a.label.clone(),
                    operator: a.operator.matrix().clone(),
                })
                .collect(),
        }
    }
}
