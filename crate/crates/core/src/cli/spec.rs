//! System spec files: one JSON object holding any of a cycle, a state, a
//! Hamiltonian, labeled projectors and a perception algebra.

use std::path::Path;

use indexmap::IndexMap;
use serde::Deserialize;
use serde_json::Value;

use crate::classical::{diag_projector, ClassicalCycle, CycleFile, PerceptionSet};
use crate::error::{Error, Result};
use crate::matcore::ComplexMatrix;
use crate::measure::{AlgebraFile, PerceptionAlgebra};
use crate::quantum::{DensityMatrix, Projector, RealityMode};
use crate::superselect::Hamiltonian;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    cycle: Option<CycleFile>,
    rho: Option<ComplexMatrix>,
    hamiltonian: Option<ComplexMatrix>,
    projectors: Option<IndexMap<String, Value>>,
    algebra: Option<AlgebraFile>,
    sets: Option<IndexMap<String, Vec<String>>>,
    reality_mode: Option<ModeName>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
enum ModeName {
    Complex,
    Real,
}

/// How a projector was written in the spec file.
#[derive(Debug, Clone, PartialEq)]
pub enum ProjectorSource {
    Characteristic(PerceptionSet),
    Matrix,
}

#[derive(Debug, Clone)]
pub struct LabeledProjector {
    pub label: String,
    pub source: ProjectorSource,
    pub projector: Projector,
}

/// Loader settings taken from the command line.
#[derive(Debug, Clone, Copy)]
pub struct LoadOptions {
    /// Forces real mode regardless of the file.
    pub force_real: bool,
    pub tol: f64,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self {
            force_real: false,
            tol: crate::matcore::DEFAULT_TOL,
        }
    }
}

/// Validated contents of a spec file. All present parts share one dimension.
#[derive(Debug, Clone)]
pub struct SystemSpec {
    pub mode: RealityMode,
    pub dim: Option<usize>,
    pub cycle: Option<ClassicalCycle>,
    pub rho: Option<DensityMatrix>,
    pub hamiltonian: Option<Hamiltonian>,
    pub projectors: Vec<LabeledProjector>,
    pub algebra: Option<PerceptionAlgebra>,
    pub sets: Vec<(String, Vec<String>)>,
}

pub fn load_spec(path: &Path, opts: LoadOptions) -> Result<SystemSpec> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_spec(&text, opts)
}

pub fn parse_spec(text: &str, opts: LoadOptions) -> Result<SystemSpec> {
    let file: SpecFile = serde_json::from_str(text).map_err(|e| Error::SpecParse(e.to_string()))?;

    let mode = match (opts.force_real, file.reality_mode) {
        (true, _) | (false, Some(ModeName::Real)) => RealityMode::Real,
        _ => RealityMode::Complex,
    };
    let mut dims = DimTracker::default();

    let cycle = file
        .cycle
        .map(|c| ClassicalCycle::try_from(c).map_err(|e| validation("cycle", e)))
        .transpose()?;
    if let Some(c) = &cycle {
        dims.observe("cycle", c.n())?;
    }

    let rho = file
        .rho
        .map(|m| DensityMatrix::validated(mode, m, opts.tol).map_err(|e| validation("rho", e)))
        .transpose()?;
    if let Some(r) = &rho {
        dims.observe("rho", r.dim())?;
    }

    let hamiltonian = file
        .hamiltonian
        .map(|m| Hamiltonian::new_in(mode, m).map_err(|e| validation("hamiltonian", e)))
        .transpose()?;
    if let Some(h) = &hamiltonian {
        dims.observe("hamiltonian", h.dim())?;
    }

    let mut projectors = Vec::new();
    for (label, value) in file.projectors.unwrap_or_default() {
        let what = format!("projector `{label}`");
        let (source, mat) = parse_projector_value(&what, value)?;
        let projector =
            Projector::validated(mode, mat, opts.tol).map_err(|e| validation(&what, e))?;
        dims.observe(&what, projector.dim())?;
        projectors.push(LabeledProjector {
            label,
            source,
            projector,
        });
    }

    let algebra = file
        .algebra
        .map(|a| a.into_algebra(mode).map_err(|e| validation("algebra", e)))
        .transpose()?;
    if let Some(a) = &algebra {
        dims.observe("algebra", a.dim())?;
    }

    let sets: Vec<(String, Vec<String>)> = file.sets.unwrap_or_default().into_iter().collect();
    if !sets.is_empty() {
        let Some(alg) = &algebra else {
            return Err(Error::Validation(
                "`sets` given without an `algebra`".into(),
            ));
        };
        let labels = alg.labels();
        for (name, members) in &sets {
            if let Some(bad) = members.iter().find(|m| !labels.contains(&m.as_str())) {
                return Err(Error::Validation(format!(
                    "set `{name}` names unknown atom `{bad}`"
                )));
            }
        }
    }

    Ok(SystemSpec {
        mode,
        dim: dims.dim,
        cycle,
        rho,
        hamiltonian,
        projectors,
        algebra,
        sets,
    })
}

fn parse_projector_value(what: &str, value: Value) -> Result<(ProjectorSource, ComplexMatrix)> {
    let is_vector = value
        .as_array()
        .is_some_and(|items| items.iter().all(Value::is_number));
    if is_vector {
        let chi: Vec<u8> = serde_json::from_value(value)
            .map_err(|e| Error::SpecParse(format!("{what}: characteristic vector: {e}")))?;
        let set = PerceptionSet::from_chi(&chi).map_err(|e| validation(what, e))?;
        let mat = diag_projector(&set);
        Ok((ProjectorSource::Characteristic(set), mat))
    } else {
        let mat: ComplexMatrix =
            serde_json::from_value(value).map_err(|e| Error::SpecParse(format!("{what}: {e}")))?;
        Ok((ProjectorSource::Matrix, mat))
    }
}

// Real-mode violations keep their own category; everything else found while
// validating a spec is reported as a validation failure.
fn validation(what: &str, err: Error) -> Error {
    match err {
        Error::NotReal { .. } => err,
        other => Error::Validation(format!("{what}: {other}")),
    }
}

#[derive(Default)]
struct DimTracker {
    dim: Option<usize>,
    first: String,
}

impl DimTracker {
    fn observe(&mut self, what: &str, dim: usize) -> Result<()> {
        match self.dim {
            None => {
                self.dim = Some(dim);
                self.first = what.to_string();
                Ok(())
            }
            Some(d) if d == dim => Ok(()),
            Some(d) => Err(Error::Validation(format!(
                "{what} has dimension {dim} but {} has dimension {d}",
                self.first
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_mixed_projector_forms() {
        let spec = parse_spec(
            r#"{
                "rho": [[[0.5,0],[0.5,0]],[[0.5,0],[0.5,0]]],
                "projectors": {"first": [1, 0], "plus": [[[0.5,0],[0.5,0]],[[0.5,0],[0.5,0]]]}
            }"#,
            LoadOptions::default(),
        )
        .unwrap();
        assert_eq!(spec.dim, Some(2));
        assert_eq!(spec.projectors.len(), 2);
        assert_eq!(spec.projectors[0].label, "first");
        assert!(matches!(
            spec.projectors[0].source,
            ProjectorSource::Characteristic(_)
        ));
        assert_eq!(spec.projectors[1].source, ProjectorSource::Matrix);
    }

    #[test]
    fn rejects_dimension_disagreement() {
        let err = parse_spec(
            r#"{"cycle": {"n": 3, "schedule": [[1,1],[2,1],[3,1]]}, "projectors": {"a": [1, 0]}}"#,
            LoadOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
    }

    #[test]
    fn error_categories() {
        let opts = LoadOptions::default();
        assert!(matches!(parse_spec("{", opts), Err(Error::SpecParse(_))));
        assert!(matches!(
            parse_spec(r#"{"bogus": 1}"#, opts),
            Err(Error::SpecParse(_))
        ));
        assert!(matches!(
            parse_spec(r#"{"rho": [[[1.5,0],[0,0]],[[0,0],[-0.5,0]]]}"#, opts),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            parse_spec(r#"{"projectors": {"x": [1, 2]}}"#, opts),
            Err(Error::Validation(_))
        ));
        let complex_rho = r#"{"rho": [[[0.5,0],[0,0.5]],[[0,-0.5],[0.5,0]]]}"#;
        assert!(parse_spec(complex_rho, opts).is_ok());
        let real = LoadOptions {
            force_real: true,
            ..opts
        };
        assert!(matches!(
            parse_spec(complex_rho, real),
            Err(Error::NotReal { .. })
        ));
    }

    #[test]
    fn sets_need_known_atoms() {
        let text = r#"{
            "algebra": {"atoms": [{"label": "a", "operator": [[[1,0]]]}]},
            "sets": {"s": ["a", "b"]}
        }"#;
        assert!(matches!(
            parse_spec(text, LoadOptions::default()),
            Err(Error::Validation(_))
        ));
    }
}
