//! Front end for `bicouple-core`: run configurations, the preset catalogue,
//! tolerance checks and CSV/SVG artifacts.

pub mod config;
pub mod error;
pub mod output;
pub mod presets;
pub mod runner;
pub mod svg;

use std::path::PathBuf;

use bicouple_core::Summation;

pub use config::{RunConfig, RunSpec};
pub use error::{CliError, ConfigError};
pub use runner::{Check, RunResult, Verdict};

/// Everything needed to execute one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    pub name: String,
    pub specs: Vec<RunSpec>,
    pub checks: Vec<Check>,
    pub summation: Summation,
    pub output_dir: Option<PathBuf>,
    pub plot: bool,
}

impl Plan {
    pub fn from_preset(name: &str) -> Result<Self, ConfigError> {
        let p = presets::preset(name)?;
        Ok(Self {
            name: p.name.to_string(),
            specs: p.specs()?,
            checks: p.checks,
            summation: Summation::Sequential,
            output_dir: None,
            plot: false,
        })
    }

    pub fn from_config(config: &RunConfig) -> Result<Self, ConfigError> {
        config.check_preset_companions()?;
        let mut plan = match &config.preset {
            Some(name) => Self::from_preset(name)?,
            None => {
                let spec = config.resolve()?;
                Self {
                    name: spec.label.clone(),
                    specs: vec![spec],
                    checks: Vec::new(),
                    summation: Summation::Sequential,
                    output_dir: None,
                    plot: false,
                }
            }
        };
        plan.summation = config.summation.unwrap_or(plan.summation);
        plan.output_dir = config.output_dir.clone();
        plan.plot = config.plot.unwrap_or(false);
        Ok(plan)
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub results: Vec<RunResult>,
    pub verdicts: Vec<Verdict>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            error::EXIT_PASS
        } else {
            error::EXIT_TOLERANCE
        }
    }
}

pub fn execute_plan(plan: &Plan) -> Result<Report, CliError> {
    let results = runner::execute(&plan.specs, plan.summation)?;
    let verdicts = runner::evaluate_all(&plan.checks, &results);
    Ok(Report { results, verdicts })
}
