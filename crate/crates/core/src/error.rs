use thiserror::Error;

use crate::grid::Layout;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("mesh too coarse for stencil: m = {m}, need m >= 2")]
    MeshTooCoarse { m: usize },

    #[error("invalid physical parameters: {0}")]
    InvalidPhysicalParameters(String),

    #[error("channel flux denominator degenerate: |{denominator:e}| < {epsilon:e}")]
    ChannelDenominatorDegenerate { denominator: f64, epsilon: f64 },

    #[error("membrane flux singular: K_d^2 + v^2 = 0")]
    MembraneFluxSingular,

    #[error("invalid ratio r = {0}, must be positive")]
    InvalidRatio(f64),

    #[error("CFL violated: nu = {nu} exceeds 1/2")]
    CflViolated { nu: f64 },

    #[error("incompatible configuration: {0}")]
    IncompatibleConfiguration(String),

    #[error("layout mismatch: expected {expected:?}, found {found:?}")]
    LayoutMismatch { expected: Layout, found: Layout },

    #[error("state does not match grid: {0}")]
    MalformedState(String),

    #[error("solution blow-up at step {step}")]
    BlowUp { step: u64 },

    #[error("step count must be at least 1")]
    NoSteps,

    #[error("mass ledger needs at least 2 entries, has {0}")]
    TooFewEntries(usize),

    #[error("unknown initial data `{0}`")]
    UnknownInitialData(String),
}
