//! Error type shared by every module.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square: row {row} has {len} entries, expected {dim}")]
    NotSquare { row: usize, len: usize, dim: usize },

    #[error("matrix must have dimension >= 1")]
    EmptyMatrix,

    #[error("non-finite entry at ({row}, {col})")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("matrix is not unitary (defect {defect:.3e})")]
    NotUnitary { defect: f64 },

    #[error("matrix is not a projector")]
    NotProjector,

    #[error("matrix is not a density matrix")]
    NotDensity,

    #[error("operator is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("matrix has imaginary part {max_imag:.3e} in real mode")]
    NotReal { max_imag: f64 },

    #[error("projectors do not commute (commutator norm {defect:.3e}); their product is not a projector")]
    NonCommuting { defect: f64 },

    #[error("unknown atom label `{0}`")]
    UnknownLabel(String),

    #[error("duplicate atom label `{0}`")]
    DuplicateLabel(String),

    #[error("non-finite measure")]
    NonFinite,

    #[error("total measure {0:.3e} is too small to normalize")]
    ZeroTotalMeasure(f64),

    #[error("conditioning set has measure {0:.3e}, too small to condition on")]
    ZeroConditionMeasure(f64),

    #[error("set is not a subset of the conditioning set (label `{0}`)")]
    NotSubset(String),

    #[error("projectors do not form a partition of unity: {0}")]
    NotAPartition(String),

    #[error("numerical integrity violation: {0}")]
    NumericalIntegrity(String),

    #[error("invalid cycle: {0}")]
    InvalidCycle(String),

    #[error("invalid fraction vector: {0}")]
    InvalidFractions(String),

    #[error("invalid perception set: {0}")]
    InvalidSet(String),

    #[error("spec parse error: {0}")]
    SpecParse(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Short tag used to prefix CLI diagnostics.
    pub fn category(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NotSquare { .. } | Error::EmptyMatrix | Error::NonFiniteEntry { .. } => {
                "InvalidMatrix"
            }
            Error::NotHermitian { .. } => "NotHermitian",
            Error::NotUnitary { .. } => "NotUnitary",
            Error::NotProjector => "NotProjector",
            Error::NotDensity => "NotDensity",
            Error::NotPositive { .. } => "NotPositive",
            Error::NotReal { .. } => "NotReal",
            Error::NonCommuting { .. } => "NonCommuting",
            Error::UnknownLabel(_) => "UnknownLabel",
            Error::DuplicateLabel(_) => "DuplicateLabel",
            Error::NonFinite => "NonFinite",
            Error::ZeroTotalMeasure(_) => "ZeroTotalMeasure",
            Error::ZeroConditionMeasure(_) => "ZeroConditionMeasure",
            Error::NotSubset(_) => "NotSubset",
            Error::NotAPartition(_) => "NotAPartition",
            Error::NumericalIntegrity(_) => "NumericalIntegrity",
            Error::InvalidCycle(_) => "InvalidCycle",
            Error::InvalidFractions(_) => "InvalidFractions",
            Error::InvalidSet(_) => "InvalidSet",
            Error::SpecParse(_) => "SpecParse",
            Error::Validation(_) => "Validation",
            Error::Io(_) => "Io",
        }
    }
}
