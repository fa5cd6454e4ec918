//! Explicit FTCS time stepping for the bi-domain problem.
//!
//! The scalar update formulas are exposed individually so they can be
//! checked in isolation; [`advance`] and [`Simulation`] assemble them into a
//! full step. Every new value is computed from old-level values only.

use serde::{Deserialize, Serialize};

use crate::conservation::{mass, LedgerEntry, MassLedger, Summation};
use crate::error::{Error, Result};
use crate::fluxes::{CouplingSpec, FluxStencil};
use crate::grid::{BiDomainState, Layout};

/// Fraction of the stability bound used for the reference runs.
pub const SAFETY_FRACTION: f64 = 0.4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Ghost-value elimination at the outer homogeneous Neumann boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryTreatment {
    /// Central difference about the boundary node: `u_{-1} = u_1`.
    CentralGhost,
    /// One-sided difference: `u_{-1} = u_0`.
    OneSidedGhost,
}

impl BoundaryTreatment {
    /// The treatment that keeps the discrete mass constant for `layout`.
    pub fn conservative_for(layout: Layout) -> Self {
        match layout {
            Layout::Nodal => Self::CentralGhost,
            Layout::FiniteVolume => Self::OneSidedGhost,
        }
    }
}

fn check_physical(d_minus: f64, d_plus: f64, dx: f64) -> Result<()> {
    let ok = |x: f64| x.is_finite() && x > 0.0;
    if !(ok(d_minus) && ok(d_plus) && ok(dx)) {
        return Err(Error::InvalidPhysicalParameters(format!(
            "need positive finite D_-, D_+, dx; got {d_minus}, {d_plus}, {dx}"
        )));
    }
    Ok(())
}

/// Largest stable time step `dx^2 / (2 max(D_-, D_+))`.
pub fn cfl_limit(d_minus: f64, d_plus: f64, dx: f64) -> Result<f64> {
    check_physical(d_minus, d_plus, dx)?;
    Ok(dx * dx / (2.0 * d_minus.max(d_plus)))
}

/// `fraction * dx^2 / max(D_-, D_+)`, so that `max(nu) = fraction`.
pub fn fractional_dt(d_minus: f64, d_plus: f64, dx: f64, fraction: f64) -> Result<f64> {
    check_physical(d_minus, d_plus, dx)?;
    if !(fraction.is_finite() && fraction > 0.0) {
        return Err(Error::InvalidPhysicalParameters(format!(
            "cfl fraction must be positive, got {fraction}"
        )));
    }
    Ok(fraction * dx * dx / d_minus.max(d_plus))
}

/// The reference time step with `max(nu) = 0.4`.
pub fn safety_dt(d_minus: f64, d_plus: f64, dx: f64) -> Result<f64> {
    fractional_dt(d_minus, d_plus, dx, SAFETY_FRACTION)
}

#[inline(always)]
pub fn interior_step(left: f64, center: f64, right: f64, nu: f64) -> f64 {
    center + nu * (right - center) - nu * (center - left)
}

/// Central ghost value. `boundary` is `u_0` (left) or `v_N` (right) and
/// `neighbor` is `u_1` or `v_{N-1}`.
#[inline]
pub fn boundary_step_central(boundary: f64, neighbor: f64, nu: f64, side: Side) -> f64 {
    match side {
        Side::Left => boundary + 2.0 * nu * (neighbor - boundary),
        Side::Right => boundary - 2.0 * nu * (boundary - neighbor),
    }
}

#[inline]
pub fn boundary_step_onesided(boundary: f64, neighbor: f64, nu: f64, side: Side) -> f64 {
    match side {
        Side::Left => boundary + nu * (neighbor - boundary),
        Side::Right => boundary - nu * (boundary - neighbor),
    }
}

/// Nodal Dirichlet-Neumann update. Returns `(u_m, v_m)` with `v_m = u_m`.
#[inline]
pub fn couple_dirichlet_neumann(
    u_prev: f64,
    u_m: f64,
    v_next: f64,
    nu_minus: f64,
    nu_plus: f64,
) -> (f64, f64) {
    let w = u_m + nu_plus * (v_next - u_m) - nu_minus * (u_m - u_prev);
    (w, w)
}

/// Interface update with the doubled increments.
#[inline]
pub fn couple_giles_inconsistent(
    u_prev: f64,
    u_m: f64,
    v_next: f64,
    nu_minus: f64,
    nu_plus: f64,
    r: f64,
) -> (f64, f64) {
    let w = u_m + 2.0 * r * nu_plus * (v_next - u_m) - 2.0 * nu_minus * (u_m - u_prev);
    (w, w)
}

#[inline]
pub fn couple_giles_correct(
    u_prev: f64,
    u_m: f64,
    v_next: f64,
    nu_minus: f64,
    nu_plus: f64,
    r: f64,
) -> Result<(f64, f64)> {
    if r.is_nan() || r <= 0.0 {
        return Err(Error::InvalidRatio(r));
    }
    let w = u_m + (2.0 * r * nu_plus / (1.0 + r)) * (v_next - u_m)
        - (2.0 * nu_minus / (1.0 + r)) * (u_m - u_prev);
    Ok((w, w))
}

/// One-sided flux coupling. `j` is `J(u_m, v_m)` at the old time level and
/// `dt_over_dx` is `dt / dx`.
#[allow(clippy::too_many_arguments)]
#[inline]
pub fn couple_flux_onesided(
    u_prev: f64,
    u_m: f64,
    v_m: f64,
    v_next: f64,
    nu_minus: f64,
    nu_plus: f64,
    dt_over_dx: f64,
    j: f64,
) -> (f64, f64) {
    (
        u_m - nu_minus * (u_m - u_prev) - dt_over_dx * j,
        v_m + nu_plus * (v_next - v_m) + dt_over_dx * j,
    )
}

/// Central flux coupling on the nodal mesh.
#[allow(clippy::too_many_arguments)]
#[inline]
pub fn couple_flux_central(
    u_prev: f64,
    u_m: f64,
    v_m: f64,
    v_next: f64,
    nu_minus: f64,
    nu_plus: f64,
    dt_over_dx: f64,
    j: f64,
) -> (f64, f64) {
    (
        u_m - 2.0 * nu_minus * (u_m - u_prev) - 2.0 * dt_over_dx * j,
        v_m + 2.0 * nu_plus * (v_next - v_m) + 2.0 * dt_over_dx * j,
    )
}

/// Finite-volume Dirichlet-Neumann update of the two cells adjacent to the
/// interface. Arguments are `u_{m-1}, u_m, v_{m+1}, v_{m+2}`; returns
/// `(u_m, v_{m+1})`.
#[inline]
pub fn couple_fv_dirichlet_neumann(
    u_prev: f64,
    u_m: f64,
    v_first: f64,
    v_second: f64,
    nu_minus: f64,
    nu_plus: f64,
) -> (f64, f64) {
    (
        u_m + nu_plus * (v_first - u_m) - nu_minus * (u_m - u_prev),
        fv_right_continuity(u_m, v_first, v_second, nu_plus),
    )
}

/// Right-cell update shared by the finite-volume continuity couplings.
#[inline]
fn fv_right_continuity(u_m: f64, v_first: f64, v_second: f64, nu_plus: f64) -> f64 {
    v_first + nu_plus * (v_second - v_first) - nu_plus * (v_first - u_m)
}

/// Validated scheme parameters for one simulation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchemeConfig {
    pub layout: Layout,
    pub d_minus: f64,
    pub d_plus: f64,
    pub dt: f64,
    pub boundary: BoundaryTreatment,
    pub coupling: CouplingSpec,
    /// Permit `nu > 1/2`.
    #[serde(default)]
    pub allow_unstable: bool,
    /// Permit the boundary treatment that is non-conservative for `layout`.
    #[serde(default)]
    pub allow_nonconservative_boundary: bool,
}

impl SchemeConfig {
    /// Configuration with the conservative boundary treatment for `layout`.
    pub fn new(layout: Layout, d_minus: f64, d_plus: f64, dt: f64, coupling: CouplingSpec) -> Self {
        Self {
            layout,
            d_minus,
            d_plus,
            dt,
            boundary: BoundaryTreatment::conservative_for(layout),
            coupling,
            allow_unstable: false,
            allow_nonconservative_boundary: false,
        }
    }

    /// Selects a boundary treatment; the non-conservative one is accepted.
    pub fn with_boundary(mut self, boundary: BoundaryTreatment) -> Self {
        self.boundary = boundary;
        self.allow_nonconservative_boundary |=
            boundary != BoundaryTreatment::conservative_for(self.layout);
        self
    }

    pub fn allowing_unstable(mut self) -> Self {
        self.allow_unstable = true;
        self
    }

    pub fn nu_minus(&self, dx: f64) -> f64 {
        self.d_minus * self.dt / (dx * dx)
    }

    pub fn nu_plus(&self, dx: f64) -> f64 {
        self.d_plus * self.dt / (dx * dx)
    }

    /// Checks the configuration against a grid spacing and returns the
    /// derived step coefficients.
    pub fn coefficients(&self, layout: Layout, dx: f64) -> Result<Coefficients> {
        check_physical(self.d_minus, self.d_plus, dx)?;
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidPhysicalParameters(format!(
                "time step must be positive, got {}",
                self.dt
            )));
        }
        if layout != self.layout {
            return Err(Error::LayoutMismatch {
                expected: self.layout,
                found: layout,
            });
        }
        self.coupling.validate()?;
        if self.layout == Layout::FiniteVolume {
            if let CouplingSpec::Flux {
                stencil: FluxStencil::Central,
                ..
            } = self.coupling
            {
                return Err(Error::IncompatibleConfiguration(
                    "central flux coupling needs an interface node; use the one-sided stencil \
                     on the finite-volume layout"
                        .into(),
                ));
            }
        }
        if self.boundary != BoundaryTreatment::conservative_for(self.layout)
            && !self.allow_nonconservative_boundary
        {
            return Err(Error::IncompatibleConfiguration(format!(
                "{:?} boundaries do not conserve mass on the {:?} layout; set \
                 allow_nonconservative_boundary to run them anyway",
                self.boundary, self.layout
            )));
        }
        let c = Coefficients {
            nu_minus: self.nu_minus(dx),
            nu_plus: self.nu_plus(dx),
            dt_over_dx: self.dt / dx,
        };
        let nu = c.nu_minus.max(c.nu_plus);
        if nu > 0.5 && !self.allow_unstable {
            return Err(Error::CflViolated { nu });
        }
        Ok(c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub nu_minus: f64,
    pub nu_plus: f64,
    pub dt_over_dx: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepReport {
    pub step: u64,
    pub t: f64,
    /// `C_{n+1} - C_n` when the step was audited.
    pub drift: Option<f64>,
}

/// One full time step. The input state is not modified.
pub fn advance(state: &BiDomainState, config: &SchemeConfig) -> Result<BiDomainState> {
    let mut sim = Simulation::new(state.clone(), *config)?.full_sweeps();
    sim.step()?;
    Ok(sim.into_state())
}

/// A running simulation with reusable buffers.
///
/// A leading run of bitwise-equal `u` values and a trailing run of equal `v`
/// values stay exactly unchanged under the update (`c + nu*0 - nu*0 == c`),
/// so only the entries next to and inside the non-constant region are
/// recomputed. The result is bit-identical to a full sweep.
#[derive(Debug, Clone)]
pub struct Simulation {
    config: SchemeConfig,
    coeffs: Coefficients,
    state: BiDomainState,
    t0: f64,
    step: u64,
    scratch_u: Vec<f64>,
    scratch_v: Vec<f64>,
    track_quiet: bool,
    /// Length of the leading run of equal `u` values.
    quiet_u: usize,
    /// Length of the trailing run of equal `v` values.
    quiet_v: usize,
}

impl Simulation {
    pub fn new(state: BiDomainState, config: SchemeConfig) -> Result<Self> {
        state.validate()?;
        let coeffs = config.coefficients(state.layout(), state.grid.dx())?;
        let len = state.grid.side_len();
        let mut sim = Self {
            config,
            coeffs,
            t0: state.t,
            state,
            step: 0,
            scratch_u: Vec::with_capacity(len),
            scratch_v: Vec::with_capacity(len),
            track_quiet: true,
            quiet_u: 1,
            quiet_v: 1,
        };
        sim.rescan_quiet();
        Ok(sim)
    }

    /// Disables quiet-region tracking; every entry is recomputed each step.
    pub fn full_sweeps(mut self) -> Self {
        self.track_quiet = false;
        self.quiet_u = 1;
        self.quiet_v = 1;
        self
    }

    pub fn state(&self) -> &BiDomainState {
        &self.state
    }

    pub fn into_state(self) -> BiDomainState {
        self.state
    }

    pub fn config(&self) -> &SchemeConfig {
        &self.config
    }

    pub fn coefficients(&self) -> Coefficients {
        self.coeffs
    }

    pub fn steps_taken(&self) -> u64 {
        self.step
    }

    fn rescan_quiet(&mut self) {
        if !self.track_quiet {
            return;
        }
        self.quiet_u = leading_run(&self.state.u, 1);
        self.quiet_v = trailing_run(&self.state.v, 1);
    }

    /// Advances by one time step.
    pub fn step(&mut self) -> Result<StepReport> {
        let len = self.state.u.len();
        let iface_u = len - 1;
        let Coefficients {
            nu_minus,
            nu_plus,
            dt_over_dx,
        } = self.coeffs;

        // Left: entries j < start_u are untouched.
        let start_u = (self.quiet_u - 1).min(iface_u);
        let lo_u = start_u.saturating_sub(1);
        // Right: entries j >= end_v are untouched.
        let end_v = (len - self.quiet_v + 1).clamp(1, len);
        let hi_v = end_v.min(len - 1);

        self.scratch_u.clear();
        self.scratch_u.extend_from_slice(&self.state.u[lo_u..]);
        self.scratch_v.clear();
        self.scratch_v.extend_from_slice(&self.state.v[..=hi_v]);
        let old_u = &self.scratch_u;
        let old_v = &self.scratch_v;
        let u = &mut self.state.u;
        let v = &mut self.state.v;

        let boundary_step = match self.config.boundary {
            BoundaryTreatment::CentralGhost => boundary_step_central,
            BoundaryTreatment::OneSidedGhost => boundary_step_onesided,
        };

        // left boundary and interior
        if start_u == 0 {
            u[0] = boundary_step(old_u[0], old_u[1], nu_minus, Side::Left);
        }
        let first = start_u.max(1);
        if first < iface_u {
            let window = &old_u[first - 1 - lo_u..];
            for (dst, w) in u[first..iface_u].iter_mut().zip(window.windows(3)) {
                *dst = interior_step(w[0], w[1], w[2], nu_minus);
            }
        }

        // right interior and boundary
        let last_v = len - 1;
        let interior_end = end_v.min(last_v);
        if interior_end > 1 {
            for (dst, w) in v[1..interior_end].iter_mut().zip(old_v.windows(3)) {
                *dst = interior_step(w[0], w[1], w[2], nu_plus);
            }
        }
        if end_v == len {
            v[last_v] = boundary_step(old_v[last_v], old_v[last_v - 1], nu_plus, Side::Right);
        }

        // interface
        let u_prev = old_u[iface_u - 1 - lo_u];
        let u_m = old_u[iface_u - lo_u];
        let v_m = old_v[0];
        let v_next = old_v[1];
        let (new_u, new_v) = match (self.config.layout, self.config.coupling) {
            (Layout::Nodal, CouplingSpec::DirichletNeumann) => {
                couple_dirichlet_neumann(u_prev, u_m, v_next, nu_minus, nu_plus)
            }
            (Layout::Nodal, CouplingSpec::GilesInconsistent { r }) => {
                couple_giles_inconsistent(u_prev, u_m, v_next, nu_minus, nu_plus, r)
            }
            (Layout::Nodal, CouplingSpec::GilesCorrect { r }) => {
                couple_giles_correct(u_prev, u_m, v_next, nu_minus, nu_plus, r)?
            }
            (Layout::FiniteVolume, CouplingSpec::DirichletNeumann) => {
                couple_fv_dirichlet_neumann(u_prev, u_m, v_m, v_next, nu_minus, nu_plus)
            }
            (Layout::FiniteVolume, CouplingSpec::GilesInconsistent { r }) => (
                couple_giles_inconsistent(u_prev, u_m, v_m, nu_minus, nu_plus, r).0,
                fv_right_continuity(u_m, v_m, v_next, nu_plus),
            ),
            (Layout::FiniteVolume, CouplingSpec::GilesCorrect { r }) => (
                couple_giles_correct(u_prev, u_m, v_m, nu_minus, nu_plus, r)?.0,
                fv_right_continuity(u_m, v_m, v_next, nu_plus),
            ),
            (layout, CouplingSpec::Flux { flux, stencil }) => {
                let j = flux.eval(u_m, v_m)?;
                match (layout, stencil) {
                    (_, FluxStencil::OneSided) => couple_flux_onesided(
                        u_prev, u_m, v_m, v_next, nu_minus, nu_plus, dt_over_dx, j,
                    ),
                    (Layout::Nodal, FluxStencil::Central) => couple_flux_central(
                        u_prev, u_m, v_m, v_next, nu_minus, nu_plus, dt_over_dx, j,
                    ),
                    (Layout::FiniteVolume, FluxStencil::Central) => {
                        unreachable!("rejected by SchemeConfig::coefficients")
                    }
                }
            }
        };
        u[iface_u] = new_u;
        v[0] = new_v;

        self.step += 1;
        self.state.t = self.t0 + self.step as f64 * self.config.dt;

        let written_finite = u[start_u..].iter().chain(&v[..end_v]).all(|x| x.is_finite());
        if !written_finite {
            return Err(Error::BlowUp { step: self.step });
        }

        if self.track_quiet {
            self.quiet_u = if start_u >= 1 {
                leading_run(u, start_u)
            } else {
                leading_run(u, 1)
            };
            self.quiet_v = if end_v < len {
                trailing_run(v, len - end_v)
            } else {
                trailing_run(v, 1)
            };
        }

        Ok(StepReport {
            step: self.step,
            t: self.state.t,
            drift: None,
        })
    }

    /// Advances one step and reports `C_{n+1} - C_n`.
    pub fn step_audited(&mut self, summation: Summation) -> Result<StepReport> {
        let before = mass(&self.state, summation)?;
        let mut report = self.step()?;
        report.drift = Some(mass(&self.state, summation)? - before);
        Ok(report)
    }
}

/// Length of the leading run equal (bitwise) to `values[0]`, given that the
/// first `known` entries are already known to belong to it.
fn leading_run(values: &[f64], known: usize) -> usize {
    let c = values[0].to_bits();
    known
        + values[known..]
            .iter()
            .take_while(|x| x.to_bits() == c)
            .count()
}

fn trailing_run(values: &[f64], known: usize) -> usize {
    let c = values[values.len() - 1].to_bits();
    known
        + values[..values.len() - known]
            .iter()
            .rev()
            .take_while(|x| x.to_bits() == c)
            .count()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub n_steps: u64,
    /// Ledger cadence; step 0 and the final step are always recorded.
    pub audit_every: u64,
    pub summation: Summation,
    /// Keep a copy of the state every this many steps (plus the initial one).
    pub snapshot_every: Option<u64>,
}

impl RunOptions {
    pub fn new(n_steps: u64) -> Self {
        Self {
            n_steps,
            audit_every: n_steps.max(1),
            summation: Summation::Sequential,
            snapshot_every: None,
        }
    }

    pub fn audit_every(mut self, every: u64) -> Self {
        self.audit_every = every;
        self
    }

    pub fn summation(mut self, summation: Summation) -> Self {
        self.summation = summation;
        self
    }

    pub fn snapshot_every(mut self, every: u64) -> Self {
        self.snapshot_every = Some(every);
        self
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub final_state: BiDomainState,
    pub ledger: MassLedger,
    pub snapshots: Vec<BiDomainState>,
}

/// Runs `options.n_steps` steps, auditing the discrete mass on the way.
pub fn run(initial: BiDomainState, config: &SchemeConfig, options: &RunOptions) -> Result<RunOutput> {
    if options.n_steps == 0 {
        return Err(Error::NoSteps);
    }
    if options.audit_every == 0 || options.snapshot_every == Some(0) {
        return Err(Error::IncompatibleConfiguration(
            "audit and snapshot intervals must be at least 1".into(),
        ));
    }
    if !initial.is_finite() {
        return Err(Error::BlowUp { step: 0 });
    }
    let dx = initial.grid.dx();
    let mut ledger = MassLedger::new(options.summation, dx);
    let mut snapshots = Vec::new();
    let mut sim = Simulation::new(initial, *config)?;

    let record = |sim: &Simulation, ledger: &mut MassLedger| -> Result<()> {
        ledger.push(LedgerEntry {
            step: sim.steps_taken(),
            t: sim.state().t,
            c: mass(sim.state(), options.summation)?,
        })
    };

    record(&sim, &mut ledger)?;
    if options.snapshot_every.is_some() {
        snapshots.push(sim.state().clone());
    }
    for n in 1..=options.n_steps {
        sim.step()?;
        if n % options.audit_every == 0 || n == options.n_steps {
            record(&sim, &mut ledger)?;
        }
        if let Some(every) = options.snapshot_every {
            if n % every == 0 {
                snapshots.push(sim.state().clone());
            }
        }
    }
    Ok(RunOutput {
        final_state: sim.into_state(),
        ledger,
        snapshots,
    })
}
