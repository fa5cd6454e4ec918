//! CSV artifacts: profiles, mass ledgers and the run summary.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::CliError;
use crate::runner::RunResult;
use crate::svg;

/// Shortest round-trip representation, switching to exponent form for very
/// small or very large magnitudes.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 || (1e-5..1e16).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn profile_csv(result: &RunResult) -> String {
    let s = &result.final_state;
    let mut out = String::from("x,value,side\n");
    let sides = [
        (s.grid.left_coords(), &s.u, "u"),
        (s.grid.right_coords(), &s.v, "v"),
    ];
    for (xs, values, side) in sides.iter() {
        for (x, value) in xs.iter().zip(values.iter()) {
            let _ = writeln!(out, "{},{},{side}", fmt_num(*x), fmt_num(*value));
        }
    }
    out
}

/// `drift` is the signed change `Cbar_n - Cbar_0`.
pub fn ledger_csv(result: &RunResult) -> String {
    let ledger = &result.ledger;
    let mut out = String::from("step,t,C,Cbar,drift\n");
    for (i, e) in ledger.entries().iter().enumerate() {
        let cbar = ledger.cbar(i);
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            e.step,
            fmt_num(e.t),
            fmt_num(e.c),
            fmt_num(cbar),
            fmt_num(cbar - result.c0bar)
        );
    }
    out
}

pub fn summary_csv(results: &[RunResult]) -> String {
    let mut out = String::from("coupling,C0bar,CTbar,abs_drift\n");
    for r in results {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            r.spec.label,
            fmt_num(r.c0bar),
            fmt_num(r.ctbar),
            fmt_num(r.abs_drift())
        );
    }
    out
}

fn write(path: PathBuf, contents: &str) -> Result<PathBuf, CliError> {
    fs::write(&path, contents).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

/// Writes every artifact into `dir` and returns the paths written.
pub fn emit_outputs(dir: &Path, results: &[RunResult], plot: bool) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut written = Vec::new();
    for r in results {
        let label = &r.spec.label;
        written.push(write(dir.join(format!("profile_{label}.csv")), &profile_csv(r))?);
        written.push(write(dir.join(format!("ledger_{label}.csv")), &ledger_csv(r))?);
    }
    written.push(write(dir.join("summary.csv"), &summary_csv(results))?);
    if plot {
        written.push(write(dir.join("profile.svg"), &svg::profile_plot(results))?);
    }
    Ok(written)
}
