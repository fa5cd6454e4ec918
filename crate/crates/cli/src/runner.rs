//! Executes resolved runs and evaluates tolerance checks on the results.

use bicouple_core::{run, BiDomainState, MassLedger, RunOptions, Summation};
use rayon::prelude::*;

use crate::config::RunSpec;
use crate::error::CliError;

#[derive(Debug, Clone)]
pub struct RunResult {
    pub spec: RunSpec,
    pub final_state: BiDomainState,
    pub ledger: MassLedger,
    pub c0bar: f64,
    pub ctbar: f64,
}

impl RunResult {
    pub fn abs_drift(&self) -> f64 {
        (self.ctbar - self.c0bar).abs()
    }

    /// Left-side value at the interface: `u_m` (nodal) or the last left cell.
    pub fn interface_value(&self) -> f64 {
        *self.final_state.u.last().expect("non-empty state")
    }
}

pub fn execute_one(spec: &RunSpec, summation: Summation) -> Result<RunResult, CliError> {
    let options = RunOptions::new(spec.n_steps)
        .audit_every(spec.audit_every)
        .summation(summation);
    let solver = |source| CliError::Solver {
        label: spec.label.clone(),
        source,
    };
    let out = run(spec.initial_state(), &spec.scheme(), &options).map_err(solver)?;
    let (c0bar, ctbar) = match (out.ledger.first_cbar(), out.ledger.last_cbar()) {
        (Some(a), Some(b)) => (a, b),
        _ => unreachable!("ledger holds the initial and final entries"),
    };
    Ok(RunResult {
        spec: spec.clone(),
        final_state: out.final_state,
        ledger: out.ledger,
        c0bar,
        ctbar,
    })
}

/// Runs are independent and dispatched concurrently; results keep input order.
pub fn execute(specs: &[RunSpec], summation: Summation) -> Result<Vec<RunResult>, CliError> {
    specs
        .par_iter()
        .map(|spec| execute_one(spec, summation))
        .collect()
}

/// A tolerance assertion against run results, referenced by run label.
#[derive(Debug, Clone, PartialEq)]
pub enum Check {
    /// `|drift - expected| <= tol`
    DriftWithin { run: String, expected: f64, tol: f64 },
    DriftAtMost { run: String, bound: f64 },
    FinalMassWithin { run: String, expected: f64, tol: f64 },
    /// Difference of the interface values of two runs.
    InterfaceGap { a: String, b: String, expected: f64, tol: f64 },
    /// `drift(larger) >= factor * drift(smaller)`
    DriftRatio { larger: String, smaller: String, factor: f64 },
    /// `|log10(drift) - log10(order)| <= decades`
    DriftOrder { run: String, order: f64, decades: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub check: String,
    pub passed: bool,
    pub measured: String,
}

impl Check {
    pub fn describe(&self) -> String {
        match self {
            Self::DriftWithin { run, expected, tol } => format!("{run}: drift = {expected:e} ± {tol:e}"),
            Self::DriftAtMost { run, bound } => format!("{run}: drift <= {bound:e}"),
            Self::FinalMassWithin { run, expected, tol } => format!("{run}: Cbar(T) = {expected} ± {tol:e}"),
            Self::InterfaceGap { a, b, expected, tol } => {
                format!("{a} - {b} at x = 1/2: {expected:e} ± {tol:e}")
            }
            Self::DriftRatio { larger, smaller, factor } => {
                format!("drift({larger}) >= {factor:e} * drift({smaller})")
            }
            Self::DriftOrder { run, order, decades } => {
                format!("{run}: drift within {decades} decade(s) of {order:e}")
            }
        }
    }

    pub fn evaluate(&self, results: &[RunResult]) -> Verdict {
        let find = |label: &str| results.iter().find(|r| r.spec.label == label);
        let outcome: Option<(bool, String)> = match self {
            Self::DriftWithin { run, expected, tol } => find(run).map(|r| {
                let d = r.abs_drift();
                ((d - expected).abs() <= *tol, format!("{d:e}"))
            }),
            Self::DriftAtMost { run, bound } => find(run).map(|r| {
                let d = r.abs_drift();
                (d <= *bound, format!("{d:e}"))
            }),
            Self::FinalMassWithin { run, expected, tol } => find(run).map(|r| {
                ((r.ctbar - expected).abs() <= *tol, format!("{}", r.ctbar))
            }),
            Self::InterfaceGap { a, b, expected, tol } => find(a).zip(find(b)).map(|(ra, rb)| {
                let gap = ra.interface_value() - rb.interface_value();
                ((gap - expected).abs() <= *tol, format!("{gap:e}"))
            }),
            Self::DriftRatio { larger, smaller, factor } => {
                find(larger).zip(find(smaller)).map(|(rl, rs)| {
                    let (dl, ds) = (rl.abs_drift(), rs.abs_drift());
                    (dl >= factor * ds && dl > 0.0, format!("{dl:e} vs {ds:e}"))
                })
            }
            Self::DriftOrder { run, order, decades } => find(run).map(|r| {
                let d = r.abs_drift();
                ((d.log10() - order.log10()).abs() <= *decades, format!("{d:e}"))
            }),
        };
        let (passed, measured) = outcome.unwrap_or((false, "run missing".into()));
        Verdict {
            check: self.describe(),
            passed,
            measured,
        }
    }
}

pub fn evaluate_all(checks: &[Check], results: &[RunResult]) -> Vec<Verdict> {
    checks.iter().map(|c| c.evaluate(results)).collect()
}
