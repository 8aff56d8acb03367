//! Batch front-end: `tracerule <subcommand> --spec FILE [flags]`.
//!
//! Tables go to stdout (or `--out`), `--json` switches to machine output, and
//! diagnostics go to stderr as `error[Category]: message` with exit status 1.

pub mod commands;
pub mod spec;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::error::{Error, Result};
pub use commands::{
    cmd_check, cmd_classical, cmd_dephase, cmd_measure, cmd_quantum, cmd_sample, Report,
};
pub use spec::{load_spec, parse_spec, LoadOptions, SystemSpec};

#[derive(Debug, Parser)]
#[command(
    name = "tracerule",
    version,
    about = "Trace-rule probabilities for perception sets"
)]
pub struct Args {
    #[command(subcommand)]
    pub command: Command,

    /// System spec file (UTF-8 JSON).
    #[arg(long, global = true)]
    pub spec: Option<PathBuf>,

    /// Emit JSON instead of a table.
    #[arg(long, global = true)]
    pub json: bool,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Sample count.
    #[arg(long, global = true, default_value_t = 100_000)]
    pub n: u64,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Restrict every operator to real entries.
    #[arg(long, global = true)]
    pub real: bool,

    /// Tolerance for projector and density validation.
    #[arg(long, global = true, default_value_t = crate::matcore::DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Command {
    /// Dwell fractions, classical probabilities and the trace-rule cross-check.
    Classical,
    /// tr(P rho) per projector, with superselection data when a Hamiltonian is given.
    Quantum,
    /// Infinite-time average of rho under the Hamiltonian.
    Dephase,
    /// Positive-operator measures of atoms and named sets.
    Measure,
    /// Monte Carlo sampling with a 5-sigma agreement check.
    Sample,
    /// Run every validation on the spec.
    Check,
}

/// Runs one invocation and returns the rendered output.
pub fn execute(args: &Args) -> Result<String> {
    if !(args.tol > 0.0 && args.tol.is_finite()) {
        return Err(Error::Validation("--tol must be positive".into()));
    }
    let path = args
        .spec
        .as_ref()
        .ok_or_else(|| Error::Validation("--spec PATH is required".into()))?;
    let opts = LoadOptions {
        force_real: args.real,
        tol: args.tol,
    };
    let spec = load_spec(path, opts)?;
    match args.command {
        Command::Classical => render(&cmd_classical(&spec)?, args.json),
        Command::Quantum => render(&cmd_quantum(&spec)?, args.json),
        Command::Dephase => render(&cmd_dephase(&spec)?, args.json),
        Command::Measure => render(&cmd_measure(&spec)?, args.json),
        Command::Sample => render(&cmd_sample(&spec, args.n, args.seed)?, args.json),
        Command::Check => render(&cmd_check(&spec)?, args.json),
    }
}

fn render<R: Report>(report: &R, json: bool) -> Result<String> {
    if json {
        let mut s = serde_json::to_string_pretty(report)
            .map_err(|e| Error::NumericalIntegrity(format!("serializing report: {e}")))?;
        s.push('\n');
        Ok(s)
    } else {
        Ok(report.table())
    }
}

/// Entry point for the binary; returns the process exit code.
pub fn run(args: Args) -> i32 {
    let result = execute(&args).and_then(|output| match &args.out {
        Some(path) => {
            std::fs::write(path, output).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{output}");
            Ok(())
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error[{}]: {}", e.category(), e);
            1
        }
    }
}
