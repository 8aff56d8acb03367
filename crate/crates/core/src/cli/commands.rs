use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::spec::{ProjectorSource, SystemSpec};
use crate::classical::{
    classical_density, classical_prob, diag_projector, dwell_fractions, PerceptionSet,
};
use crate::error::{Error, Result};
use crate::matcore::ComplexMatrix;
use crate::measure::{measure_of, normalized_prob, total_measure, ZERO_MEASURE};
use crate::quantum::{trace_prob, DensityMatrix, Projector};
use crate::sampler::{
    check_partition, deviation_check, sample_classical, sample_measurement, SampleReport,
    DEFAULT_SIGMA,
};
use crate::superselect::{dephase, is_superselection_compliant};

/// Output of a subcommand: a JSON form and a human table.
pub trait Report: Serialize {
    fn table(&self) -> String;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalRow {
    pub label: String,
    pub members: Vec<usize>,
    pub classical_prob: f64,
    pub trace_prob: f64,
    pub abs_diff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalReport {
    pub period: f64,
    pub dwell_fractions: Vec<f64>,
    pub density_diagonal: Vec<f64>,
    pub sets: Vec<ClassicalRow>,
    pub max_abs_diff: f64,
}

pub fn cmd_classical(spec: &SystemSpec) -> Result<ClassicalReport> {
    let cycle = spec
        .cycle
        .as_ref()
        .ok_or_else(|| Error::Validation("classical pipeline needs a `cycle`".into()))?;
    if spec.projectors.is_empty() {
        return Err(Error::Validation(
            "classical pipeline needs `projectors` given as characteristic vectors".into(),
        ));
    }
    let f = dwell_fractions(cycle);
    let rho = DensityMatrix::new(classical_density(&f))?;
    let mut rows = Vec::new();
    for lp in &spec.projectors {
        let set: &PerceptionSet = match &lp.source {
            ProjectorSource::Characteristic(s) => s,
            ProjectorSource::Matrix => return Err(Error::Validation(format!(
                "projector `{}` is a matrix; the classical pipeline needs characteristic vectors",
                lp.label
            ))),
        };
        let direct = classical_prob(set, &f)?;
        let via_trace = trace_prob(&Projector::new(diag_projector(set))?, &rho)?;
        rows.push(ClassicalRow {
            label: lp.label.clone(),
            members: set.members(),
            classical_prob: direct,
            trace_prob: via_trace,
            abs_diff: (direct - via_trace).abs(),
        });
    }
    let max_abs_diff = rows.iter().map(|r| r.abs_diff).fold(0.0, f64::max);
    Ok(ClassicalReport {
        period: cycle.period(),
        dwell_fractions: f.as_slice().to_vec(),
        density_diagonal: rho.matrix().diagonal().iter().map(|z| z.re).collect(),
        sets: rows,
        max_abs_diff,
    })
}

impl Report for ClassicalReport {
    fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "period T = {}", fmt_num(self.period));
        let _ = writeln!(out, "dwell fractions: {}", fmt_list(&self.dwell_fractions));
        let _ = writeln!(out, "rho diagonal:    {}", fmt_list(&self.density_diagonal));
        let _ = writeln!(
            out,
            "{:<16} {:<16} {:>18} {:>18} {:>10}",
            "set", "members", "chi.f", "tr(P rho)", "|diff|"
        );
        for r in &self.sets {
            let members = format!("{:?}", r.members);
            let _ = writeln!(
                out,
                "{:<16} {:<16} {:>18} {:>18} {:>10.2e}",
                r.label,
                members,
                fmt_num(r.classical_prob),
                fmt_num(r.trace_prob),
                r.abs_diff
            );
        }
        let _ = writeln!(out, "max |diff| = {:.3e}", self.max_abs_diff);
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumRow {
    pub label: String,
    pub prob: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub compliant: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dephased_prob: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumReport {
    pub dim: usize,
    pub purity: f64,
    pub projectors: Vec<QuantumRow>,
}

pub fn cmd_quantum(spec: &SystemSpec) -> Result<QuantumReport> {
    let rho = spec
        .rho
        .as_ref()
        .ok_or_else(|| Error::Validation("quantum pipeline needs `rho`".into()))?;
    if spec.projectors.is_empty() {
        return Err(Error::Validation(
            "quantum pipeline needs `projectors`".into(),
        ));
    }
    let dephased = spec
        .hamiltonian
        .as_ref()
        .map(|h| dephase(rho, h))
        .transpose()?;
    let mut rows = Vec::new();
    for lp in &spec.projectors {
        let prob = trace_prob(&lp.projector, rho)?;
        let (compliant, dephased_prob) = match (&spec.hamiltonian, &dephased) {
            (Some(h), Some(d)) => (
                Some(is_superselection_compliant(&lp.projector, h)?),
                Some(trace_prob(&lp.projector, d)?),
            ),
            _ => (None, None),
        };
        rows.push(QuantumRow {
            label: lp.label.clone(),
            prob,
            compliant,
            dephased_prob,
        });
    }
    Ok(QuantumReport {
        dim: rho.dim(),
        purity: rho.purity(),
        projectors: rows,
    })
}

impl Report for QuantumReport {
    fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "dim = {}, purity tr(rho^2) = {}",
            self.dim,
            fmt_num(self.purity)
        );
        let with_h = self.projectors.iter().any(|r| r.compliant.is_some());
        if with_h {
            let _ = writeln!(
                out,
                "{:<16} {:>18} {:>10} {:>18}",
                "projector", "tr(P rho)", "compliant", "tr(P rho_bar)"
            );
        } else {
            let _ = writeln!(out, "{:<16} {:>18}", "projector", "tr(P rho)");
        }
        for r in &self.projectors {
            match (r.compliant, r.dephased_prob) {
                (Some(c), Some(d)) => {
                    let _ = writeln!(
                        out,
                        "{:<16} {:>18} {:>10} {:>18}",
                        r.label,
                        fmt_num(r.prob),
                        if c { "yes" } else { "no" },
                        fmt_num(d)
                    );
                }
                _ => {
                    let _ = writeln!(out, "{:<16} {:>18}", r.label, fmt_num(r.prob));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DephaseReport {
    pub energies: Vec<f64>,
    /// 1-based eigen-indices of each degenerate cluster.
    pub clusters: Vec<Vec<usize>>,
    pub cluster_energies: Vec<f64>,
    pub dephased_rho: ComplexMatrix,
    pub trace_after: f64,
    pub purity_before: f64,
    pub purity_after: f64,
}

pub fn cmd_dephase(spec: &SystemSpec) -> Result<DephaseReport> {
    let rho = spec
        .rho
        .as_ref()
        .ok_or_else(|| Error::Validation("dephase needs `rho`".into()))?;
    let h = spec
        .hamiltonian
        .as_ref()
        .ok_or_else(|| Error::Validation("dephase needs `hamiltonian`".into()))?;
    let blocks = h.energy_blocks();
    let out = dephase(rho, h)?;
    Ok(DephaseReport {
        energies: h.energies().to_vec(),
        clusters: blocks
            .clusters
            .iter()
            .map(|c| c.iter().map(|j| j + 1).collect())
            .collect(),
        cluster_energies: blocks.energies.clone(),
        trace_after: out.matrix().trace().re,
        purity_before: rho.purity(),
        purity_after: out.purity(),
        dephased_rho: out.matrix().clone(),
    })
}

impl Report for DephaseReport {
    fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "energies: {}", fmt_list(&self.energies));
        for (c, e) in self.clusters.iter().zip(&self.cluster_energies) {
            let _ = writeln!(out, "  block E = {:<18} indices {:?}", fmt_num(*e), c);
        }
        let _ = writeln!(out, "dephased rho:");
        out.push_str(&fmt_matrix(&self.dephased_rho));
        let _ = writeln!(out, "trace = {}", fmt_num(self.trace_after));
        let _ = writeln!(
            out,
            "purity {} -> {}",
            fmt_num(self.purity_before),
            fmt_num(self.purity_after)
        );
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureRow {
    pub label: String,
    pub atoms: Vec<String>,
    pub measure: f64,
    pub normalized: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub total_measure: f64,
    pub normalizable: bool,
    pub atoms: Vec<MeasureRow>,
    pub sets: Vec<MeasureRow>,
}

pub fn cmd_measure(spec: &SystemSpec) -> Result<MeasureReport> {
    let alg = spec
        .algebra
        .as_ref()
        .ok_or_else(|| Error::Validation("measure needs an `algebra`".into()))?;
    let rho = spec
        .rho
        .as_ref()
        .ok_or_else(|| Error::Validation("measure needs `rho`".into()))?;
    let total = total_measure(alg, rho)?.value();
    let normalizable = total > ZERO_MEASURE;
    let row = |label: &str, atoms: Vec<String>| -> Result<MeasureRow> {
        let measure = measure_of(alg, &atoms, rho)?.value();
        let normalized = normalizable
            .then(|| normalized_prob(alg, &atoms, rho))
            .transpose()?;
        Ok(MeasureRow {
            label: label.to_string(),
            atoms,
            measure,
            normalized,
        })
    };
    let atoms = alg
        .labels()
        .into_iter()
        .map(|l| row(l, vec![l.to_string()]))
        .collect::<Result<Vec<_>>>()?;
    let sets = spec
        .sets
        .iter()
        .map(|(name, members)| row(name, members.clone()))
        .collect::<Result<Vec<_>>>()?;
    Ok(MeasureReport {
        total_measure: total,
        normalizable,
        atoms,
        sets,
    })
}

impl Report for MeasureReport {
    fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "total measure f(M) = {}", fmt_num(self.total_measure));
        if !self.normalizable {
            let _ = writeln!(out, "f(M) is zero; normalized probabilities unavailable");
        }
        let _ = writeln!(out, "{:<16} {:>18} {:>18}", "set", "measure", "f(S)/f(M)");
        for r in self.atoms.iter().chain(&self.sets) {
            let norm = r.normalized.map(fmt_num).unwrap_or_else(|| "-".into());
            let _ = writeln!(
                out,
                "{:<16} {:>18} {:>18}",
                r.label,
                fmt_num(r.measure),
                norm
            );
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleCommandReport {
    pub source: String,
    pub outcomes: Vec<String>,
    pub sigma_multiplier: f64,
    pub pass: bool,
    pub report: SampleReport,
}

/// Samples the cycle when one is present, otherwise the projector partition
/// against `rho`.
pub fn cmd_sample(spec: &SystemSpec, n: u64, seed: u64) -> Result<SampleCommandReport> {
    if n == 0 {
        return Err(Error::Validation("--n must be at least 1".into()));
    }
    let (source, outcomes, report) = if let Some(cycle) = &spec.cycle {
        let outcomes = (1..=cycle.n()).map(|i| format!("state {i}")).collect();
        ("classical", outcomes, sample_classical(cycle, n, seed))
    } else {
        let rho = spec.rho.as_ref().ok_or_else(|| {
            Error::Validation("sample needs a `cycle` or `rho` with partition `projectors`".into())
        })?;
        let partition: Vec<Projector> = spec
            .projectors
            .iter()
            .map(|p| p.projector.clone())
            .collect();
        let outcomes = spec.projectors.iter().map(|p| p.label.clone()).collect();
        (
            "quantum",
            outcomes,
            sample_measurement(&partition, rho, n, seed)?,
        )
    };
    Ok(SampleCommandReport {
        source: source.into(),
        outcomes,
        sigma_multiplier: DEFAULT_SIGMA,
        pass: deviation_check(&report, DEFAULT_SIGMA),
        report,
    })
}

impl Report for SampleCommandReport {
    fn table(&self) -> String {
        let mut out = String::new();
        let r = &self.report;
        let _ = writeln!(
            out,
            "{} sampling, N = {}, seed = {}",
            self.source, r.total, r.seed
        );
        let _ = writeln!(
            out,
            "{:<16} {:>12} {:>18} {:>18}",
            "outcome", "count", "empirical", "expected"
        );
        for (i, name) in self.outcomes.iter().enumerate() {
            let _ = writeln!(
                out,
                "{:<16} {:>12} {:>18} {:>18}",
                name,
                r.outcome_counts[i],
                fmt_num(r.empirical_freqs[i]),
                fmt_num(r.expected_probs[i])
            );
        }
        let _ = writeln!(out, "max |deviation| = {:.3e}", r.max_abs_deviation);
        let _ = writeln!(
            out,
            "{}-sigma check: {}",
            self.sigma_multiplier,
            if self.pass { "PASS" } else { "FAIL" }
        );
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub mode: String,
    pub dim: Option<usize>,
    pub checks: Vec<CheckRow>,
    pub all_ok: bool,
}

/// Every validation the loader performs plus cross-checks between the parts
/// that are present.
pub fn cmd_check(spec: &SystemSpec) -> Result<CheckReport> {
    let mut checks = Vec::new();
    let mut push = |name: &str, ok: bool, detail: String| {
        checks.push(CheckRow {
            name: name.to_string(),
            ok,
            detail,
        })
    };

    if let Some(c) = &spec.cycle {
        let f = dwell_fractions(c);
        let sum: f64 = f.as_slice().iter().sum();
        push(
            "cycle",
            true,
            format!(
                "period {}, fractions sum {}",
                fmt_num(c.period()),
                fmt_num(sum)
            ),
        );
    }
    if let Some(rho) = &spec.rho {
        push(
            "rho density",
            true,
            format!(
                "trace {}, purity {}",
                fmt_num(rho.matrix().trace().re),
                fmt_num(rho.purity())
            ),
        );
    }
    if let Some(h) = &spec.hamiltonian {
        push(
            "hamiltonian",
            true,
            format!("{} energy blocks", h.energy_blocks().len()),
        );
    }
    for lp in &spec.projectors {
        push(
            &format!("projector {}", lp.label),
            true,
            format!("rank {}", lp.projector.rank()),
        );
        if let Some(h) = &spec.hamiltonian {
            // Informational: a non-compliant projector is still valid, its
            // probability just depends on time.
            let compliant = is_superselection_compliant(&lp.projector, h)?;
            push(
                &format!("compliance {}", lp.label),
                true,
                if compliant {
                    "block-diagonal in energy"
                } else {
                    "mixes energy blocks; probability is time-dependent"
                }
                .into(),
            );
        }
    }
    if !spec.projectors.is_empty() {
        let partition: Vec<Projector> = spec
            .projectors
            .iter()
            .map(|p| p.projector.clone())
            .collect();
        // Informational: only sampling requires a partition.
        match check_partition(&partition) {
            Ok(()) => push("partition", true, "projectors resolve the identity".into()),
            Err(e) => push("partition", true, format!("not a partition ({e})")),
        }
    }
    if spec.cycle.is_some()
        && spec
            .projectors
            .iter()
            .any(|p| matches!(p.source, ProjectorSource::Characteristic(_)))
    {
        let report = cmd_classical(spec);
        match report {
            Ok(r) => push(
                "classical trace rule",
                r.max_abs_diff <= 1e-12,
                format!("max |chi.f - tr(P rho)| = {:.3e}", r.max_abs_diff),
            ),
            Err(e) => push("classical trace rule", false, e.to_string()),
        }
    }
    if let (Some(alg), Some(rho)) = (&spec.algebra, &spec.rho) {
        let total = total_measure(alg, rho)?.value();
        push(
            "algebra",
            true,
            format!("{} atoms, f(M) = {}", alg.atoms().len(), fmt_num(total)),
        );
    }
    if let (Some(rho), Some(h)) = (&spec.rho, &spec.hamiltonian) {
        let d = dephase(rho, h)?;
        let drift = (d.matrix().trace().re - rho.matrix().trace().re).abs();
        push(
            "dephase trace",
            drift <= 1e-12,
            format!("trace drift {drift:.3e}"),
        );
    }

    let all_ok = checks.iter().all(|c| c.ok);
    Ok(CheckReport {
        mode: format!("{:?}", spec.mode).to_lowercase(),
        dim: spec.dim,
        checks,
        all_ok,
    })
}

impl Report for CheckReport {
    fn table(&self) -> String {
        let mut out = String::new();
        let dim = self
            .dim
            .map(|d| d.to_string())
            .unwrap_or_else(|| "-".into());
        let _ = writeln!(out, "mode {}, dim {}", self.mode, dim);
        for c in &self.checks {
            let _ = writeln!(
                out,
                "[{}] {:<24} {}",
                if c.ok { " ok " } else { "FAIL" },
                c.name,
                c.detail
            );
        }
        let _ = writeln!(
            out,
            "{}",
            if self.all_ok {
                "all checks passed"
            } else {
                "some checks failed"
            }
        );
        out
    }
}

fn fmt_num(x: f64) -> String {
    format!("{:.15}", x)
        .trim_end_matches('0')
        .trim_end_matches('.')
        .to_string()
}

fn fmt_list(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|&x| fmt_num(x)).collect();
    format!("[{}]", parts.join(", "))
}

fn fmt_matrix(m: &ComplexMatrix) -> String {
    let mut out = String::new();
    for row in m.rows() {
        let cells: Vec<String> = row
            .iter()
            .map(|z| format!("{:>12.9}{:+.9}i", z.re, z.im))
            .collect();
        let _ = writeln!(out, "  {}", cells.join("  "));
    }
    out
}
