use std::path::PathBuf;

use thiserror::Error;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_TOLERANCE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_BLOW_UP: i32 = 3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("cannot read {path}: {message}", path = path.display())]
    Unreadable { path: PathBuf, message: String },
    #[error("{}key `{key}` {message}", line.map(|l| format!("line {l}, ")).unwrap_or_default())]
    Key {
        key: &'static str,
        message: String,
        line: Option<usize>,
    },
    #[error("unknown preset `{0}`; see `list-presets`")]
    UnknownPreset(String),
}

impl ConfigError {
    pub fn key(key: &'static str, message: impl Into<String>) -> Self {
        Self::Key {
            key,
            message: message.into(),
            line: None,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(#[from] ConfigError),
    #[error("run `{label}`: {source}")]
    Solver {
        label: String,
        source: bicouple_core::Error,
    },
    #[error("cannot write {path}: {source}", path = path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Solver {
                source: bicouple_core::Error::BlowUp { .. },
                ..
            } => EXIT_BLOW_UP,
            _ => EXIT_CONFIG,
        }
    }
}
