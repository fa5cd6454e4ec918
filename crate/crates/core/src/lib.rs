//! Explicit solvers for two diffusion equations on `[0, 1/2]` and `[1/2, 1]`
//! joined by an interface coupling condition, with homogeneous Neumann data
//! at the outer boundaries.
//!
//! Two discretizations are provided: a nodal scheme with a double node at the
//! interface and a cell-centred finite-volume scheme with the interface on a
//! cell face. The discrete total concentration can be audited every step.

pub mod conservation;
pub mod error;
pub mod fluxes;
pub mod grid;
pub mod stepper;

pub use conservation::{
    error_metrics, initial_library, mass, mass_fv, mass_nodal, ErrorNorms, ExactSolution,
    InitialData, LedgerEntry, MassLedger, Summation,
};
pub use error::{Error, Result};
pub use fluxes::{ChannelParams, CouplingSpec, FluxStencil, InterfaceFlux, MembraneParams};
pub use grid::{discretize_cell_averages, discretize_initial, BiDomainState, Grid, Layout};
pub use stepper::{
    advance, run, BoundaryTreatment, RunOptions, RunOutput, SchemeConfig, Simulation, StepReport,
};
