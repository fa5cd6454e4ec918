//! Run configuration files and their resolution into concrete runs.

use std::path::{Path, PathBuf};

use bicouple_core::stepper::{fractional_dt, BoundaryTreatment, SAFETY_FRACTION};
use bicouple_core::{
    discretize_initial, initial_library, BiDomainState, CouplingSpec, Grid, Layout, SchemeConfig,
    Summation,
};
use serde::{Deserialize, Serialize};

use crate::error::ConfigError;

/// Keys that may accompany `preset`.
const PRESET_COMPANIONS: [&str; 3] = ["output_dir", "summation", "plot"];

/// Either a preset name or a full parameter block. Absent keys are omitted
/// when serialized.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scheme: Option<Layout>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_minus: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_plus: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dx: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cfl_fraction: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_steps: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<BoundaryTreatment>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling: Option<CouplingSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_data: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub audit_every: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summation: Option<Summation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plot: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub allow_unstable: Option<bool>,
}

/// A fully specified simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub label: String,
    pub layout: Layout,
    pub m: usize,
    pub d_minus: f64,
    pub d_plus: f64,
    pub dt: f64,
    pub n_steps: u64,
    pub boundary: BoundaryTreatment,
    pub coupling: CouplingSpec,
    pub initial_data: String,
    pub audit_every: u64,
    pub allow_unstable: bool,
}

impl RunSpec {
    pub fn grid(&self) -> Grid {
        Grid::new(self.m, self.layout).expect("validated at resolution")
    }

    pub fn scheme(&self) -> SchemeConfig {
        let mut cfg = SchemeConfig::new(
            self.layout,
            self.d_minus,
            self.d_plus,
            self.dt,
            self.coupling,
        )
        .with_boundary(self.boundary);
        cfg.allow_unstable = self.allow_unstable;
        cfg
    }

    /// Point values (nodal) or cell-midpoint values (finite volume).
    pub fn initial_state(&self) -> BiDomainState {
        let data = initial_library(&self.initial_data).expect("validated at resolution");
        discretize_initial(self.grid(), data.left, data.right)
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let config: Self = serde_json::from_str(text).map_err(|e| ConfigError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        Ok(config)
    }

    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Unreadable {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    /// Names of the keys that are present.
    fn present_keys(&self) -> Vec<&'static str> {
        let flags = [
            ("preset", self.preset.is_some()),
            ("label", self.label.is_some()),
            ("scheme", self.scheme.is_some()),
            ("d_minus", self.d_minus.is_some()),
            ("d_plus", self.d_plus.is_some()),
            ("dx", self.dx.is_some()),
            ("m", self.m.is_some()),
            ("dt", self.dt.is_some()),
            ("cfl_fraction", self.cfl_fraction.is_some()),
            ("n_steps", self.n_steps.is_some()),
            ("boundary", self.boundary.is_some()),
            ("coupling", self.coupling.is_some()),
            ("initial_data", self.initial_data.is_some()),
            ("audit_every", self.audit_every.is_some()),
            ("summation", self.summation.is_some()),
            ("output_dir", self.output_dir.is_some()),
            ("plot", self.plot.is_some()),
            ("allow_unstable", self.allow_unstable.is_some()),
        ];
        flags.iter().filter(|(_, on)| *on).map(|(k, _)| *k).collect()
    }

    /// Checks that a preset reference carries no parameter keys.
    pub fn check_preset_companions(&self) -> Result<(), ConfigError> {
        if self.preset.is_none() {
            return Ok(());
        }
        match self
            .present_keys()
            .into_iter()
            .find(|k| *k != "preset" && !PRESET_COMPANIONS.contains(k))
        {
            Some(key) => Err(ConfigError::key(
                key,
                "cannot be combined with `preset` (allowed: output_dir, summation, plot)",
            )),
            None => Ok(()),
        }
    }

    /// Resolves a parameter block into a single run.
    pub fn resolve(&self) -> Result<RunSpec, ConfigError> {
        if self.preset.is_some() {
            return Err(ConfigError::key("preset", "a preset does not resolve to a single run"));
        }
        let layout = self.scheme.unwrap_or(Layout::Nodal);
        let d_minus = positive("d_minus", self.d_minus)?;
        let d_plus = positive("d_plus", self.d_plus)?;

        let m = match (self.dx, self.m) {
            (Some(_), Some(_)) => return Err(ConfigError::key("dx", "give exactly one of `dx` and `m`")),
            (None, None) => return Err(ConfigError::key("m", "one of `dx` and `m` is required")),
            (None, Some(m)) => m,
            (Some(dx), None) => {
                if !(dx.is_finite() && dx > 0.0) {
                    return Err(ConfigError::key("dx", format!("must be positive, got {dx}")));
                }
                let m = (0.5 / dx).round();
                if m < 1.0 || ((2.0 * m * dx) - 1.0).abs() > 1e-9 {
                    return Err(ConfigError::key("dx", format!("1/2 is not an integer multiple of {dx}")));
                }
                m as usize
            }
        };
        let grid = Grid::new(m, layout).map_err(|e| ConfigError::key("m", e.to_string()))?;
        let allow_unstable = self.allow_unstable.unwrap_or(false);

        let dt = match (self.dt, self.cfl_fraction) {
            (Some(_), Some(_)) => {
                return Err(ConfigError::key("dt", "give at most one of `dt` and `cfl_fraction`"))
            }
            (Some(dt), None) => positive("dt", Some(dt))?,
            (None, fraction) => {
                let fraction = fraction.unwrap_or(SAFETY_FRACTION);
                if fraction > 0.5 && !allow_unstable {
                    return Err(ConfigError::key(
                        "cfl_fraction",
                        format!("{fraction} exceeds the stability bound 0.5; set allow_unstable to force"),
                    ));
                }
                fractional_dt(d_minus, d_plus, grid.dx(), fraction)
                    .map_err(|e| ConfigError::key("cfl_fraction", e.to_string()))?
            }
        };

        let n_steps = match self.n_steps {
            Some(0) => return Err(ConfigError::key("n_steps", "must be at least 1")),
            Some(n) => n,
            None => return Err(ConfigError::key("n_steps", "is required")),
        };
        let coupling = self
            .coupling
            .ok_or_else(|| ConfigError::key("coupling", "is required"))?;
        let initial_data = self
            .initial_data
            .clone()
            .ok_or_else(|| ConfigError::key("initial_data", "is required"))?;
        initial_library(&initial_data).map_err(|e| ConfigError::key("initial_data", e.to_string()))?;
        let audit_every = match self.audit_every {
            Some(0) => return Err(ConfigError::key("audit_every", "must be at least 1")),
            Some(k) => k,
            None => n_steps,
        };

        let spec = RunSpec {
            label: self.label.clone().unwrap_or_else(|| coupling.label()),
            layout,
            m,
            d_minus,
            d_plus,
            dt,
            n_steps,
            boundary: self
                .boundary
                .unwrap_or_else(|| BoundaryTreatment::conservative_for(layout)),
            coupling,
            initial_data,
            audit_every,
            allow_unstable,
        };
        spec.scheme()
            .coefficients(layout, grid.dx())
            .map_err(|e| ConfigError::key(blame_key(&e), e.to_string()))?;
        Ok(spec)
    }
}

fn positive(key: &'static str, value: Option<f64>) -> Result<f64, ConfigError> {
    match value {
        None => Err(ConfigError::key(key, "is required")),
        Some(x) if x.is_finite() && x > 0.0 => Ok(x),
        Some(x) => Err(ConfigError::key(key, format!("must be positive and finite, got {x}"))),
    }
}

fn blame_key(e: &bicouple_core::Error) -> &'static str {
    use bicouple_core::Error;
    match e {
        Error::CflViolated { .. } => "dt",
        Error::InvalidRatio(_) => "coupling",
        Error::IncompatibleConfiguration(msg) if msg.contains("boundar") => "boundary",
        _ => "coupling",
    }
}

/// Attaches the 1-based line of `key` in `source` to a key diagnostic.
pub fn locate(err: ConfigError, source: &str) -> ConfigError {
    match err {
        ConfigError::Key { key, message, line: None } => {
            let needle = format!("\"{key}\"");
            let line = source
                .lines()
                .position(|l| l.contains(&needle))
                .map(|i| i + 1);
            ConfigError::Key { key, message, line }
        }
        other => other,
    }
}
