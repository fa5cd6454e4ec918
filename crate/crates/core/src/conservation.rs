//! Discrete total concentration, drift bookkeeping, exact solutions and the
//! reference initial data.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{BiDomainState, Layout};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Summation {
    /// Plain left-to-right accumulation.
    #[default]
    Sequential,
    /// Neumaier-compensated accumulation.
    Compensated,
}

/// Running compensated sum (Kahan-Babuska / Neumaier variant).
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

pub fn sum<I: IntoIterator<Item = f64>>(values: I, mode: Summation) -> f64 {
    match mode {
        Summation::Sequential => values.into_iter().fold(0.0, |acc, x| acc + x),
        Summation::Compensated => {
            let mut acc = CompensatedSum::default();
            values.into_iter().for_each(|x| acc.add(x));
            acc.value()
        }
    }
}

fn expect_layout(state: &BiDomainState, expected: Layout) -> Result<()> {
    state.validate()?;
    if state.layout() != expected {
        return Err(Error::LayoutMismatch {
            expected,
            found: state.layout(),
        });
    }
    Ok(())
}

/// Nodal concentration sum
/// `C = u_0/2 + u_1 + ... + u_{m-1} + u_m/2 + v_m/2 + v_{m+1} + ... + v_N/2`.
pub fn mass_nodal(state: &BiDomainState, mode: Summation) -> Result<f64> {
    expect_layout(state, Layout::Nodal)?;
    let (u, v) = (&state.u, &state.v);
    let (lu, lv) = (u.len() - 1, v.len() - 1);
    let terms = std::iter::once(0.5 * u[0])
        .chain(u[1..lu].iter().copied())
        .chain([0.5 * u[lu], 0.5 * v[0]])
        .chain(v[1..lv].iter().copied())
        .chain(std::iter::once(0.5 * v[lv]));
    Ok(sum(terms, mode))
}

/// Finite-volume concentration sum `C = u_1 + ... + u_m + v_{m+1} + ... + v_N`.
pub fn mass_fv(state: &BiDomainState, mode: Summation) -> Result<f64> {
    expect_layout(state, Layout::FiniteVolume)?;
    Ok(sum(state.u.iter().chain(&state.v).copied(), mode))
}

/// Concentration sum `C_n` for whichever layout the state uses.
pub fn mass(state: &BiDomainState, mode: Summation) -> Result<f64> {
    match state.layout() {
        Layout::Nodal => mass_nodal(state, mode),
        Layout::FiniteVolume => mass_fv(state, mode),
    }
}

/// Quadrature weights (in units of dx) that define `C_n`, in storage order
/// `u` then `v`.
pub fn mass_weights(state: &BiDomainState) -> (Vec<f64>, Vec<f64>) {
    let len = state.grid.side_len();
    let mut wu = vec![1.0; len];
    let mut wv = vec![1.0; len];
    if state.layout() == Layout::Nodal {
        wu[0] = 0.5;
        wu[len - 1] = 0.5;
        wv[0] = 0.5;
        wv[len - 1] = 0.5;
    }
    (wu, wv)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub step: u64,
    pub t: f64,
    /// Unscaled concentration sum `C_n`.
    pub c: f64,
}

/// Time series of `C_n`. The total concentration is `C̄_n = dx * C_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassLedger {
    entries: Vec<LedgerEntry>,
    summation: Summation,
    dx: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DriftSummary {
    /// `C̄_{k+1} - C̄_k` between consecutive ledger entries.
    pub per_interval: Vec<f64>,
    /// `|C̄_last - C̄_0|`.
    pub final_abs: f64,
}

impl MassLedger {
    pub fn new(summation: Summation, dx: f64) -> Self {
        Self {
            entries: Vec::new(),
            summation,
            dx,
        }
    }

    pub fn push(&mut self, entry: LedgerEntry) -> Result<()> {
        if let Some(last) = self.entries.last() {
            if entry.step <= last.step {
                return Err(Error::MalformedState(format!(
                    "ledger steps must increase: {} after {}",
                    entry.step, last.step
                )));
            }
        }
        if !entry.c.is_finite() {
            return Err(Error::BlowUp { step: entry.step });
        }
        self.entries.push(entry);
        Ok(())
    }

    pub fn entries(&self) -> &[LedgerEntry] {
        &self.entries
    }

    pub fn summation(&self) -> Summation {
        self.summation
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn cbar(&self, index: usize) -> f64 {
        self.dx * self.entries[index].c
    }

    pub fn first_cbar(&self) -> Option<f64> {
        self.entries.first().map(|e| self.dx * e.c)
    }

    pub fn last_cbar(&self) -> Option<f64> {
        self.entries.last().map(|e| self.dx * e.c)
    }

    pub fn drift(&self) -> Result<DriftSummary> {
        if self.entries.len() < 2 {
            return Err(Error::TooFewEntries(self.entries.len()));
        }
        let cbar: Vec<f64> = (0..self.entries.len()).map(|i| self.cbar(i)).collect();
        Ok(DriftSummary {
            per_interval: cbar.windows(2).map(|w| w[1] - w[0]).collect(),
            final_abs: (cbar[cbar.len() - 1] - cbar[0]).abs(),
        })
    }
}

/// `w_n(x, t) = exp(-D (n pi)^2 t) cos(n pi x) + 1`, a solution of the
/// single-domain problem with homogeneous Neumann data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactSolution {
    pub mode: u32,
    pub d: f64,
}

impl ExactSolution {
    pub fn new(mode: u32, d: f64) -> Self {
        Self { mode, d }
    }

    pub fn eval(&self, x: f64, t: f64) -> f64 {
        let k = self.mode as f64 * PI;
        (-self.d * k * k * t).exp() * (k * x).cos() + 1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorNorms {
    pub max: f64,
    /// `sqrt(sum_i w_i dx e_i^2)` with the mass quadrature weights.
    pub l2: f64,
}

/// Pointwise comparison against `sol` at the state's time and coordinates.
pub fn error_metrics(state: &BiDomainState, sol: &ExactSolution) -> ErrorNorms {
    let dx = state.grid.dx();
    let (wu, wv) = mass_weights(state);
    let mut max: f64 = 0.0;
    let mut sq = 0.0;
    let sides = [
        (state.grid.left_coords(), &state.u, wu),
        (state.grid.right_coords(), &state.v, wv),
    ];
    for (xs, values, weights) in sides.iter() {
        for ((x, value), w) in xs.iter().zip(values.iter()).zip(weights) {
            let e = value - sol.eval(*x, state.t);
            max = max.max(e.abs());
            sq += w * dx * e * e;
        }
    }
    ErrorNorms { max, l2: sq.sqrt() }
}

/// Reference initial data: left and right profiles, their antiderivatives
/// and the exact total mass on [0, 1].
#[derive(Debug, Clone, Copy)]
pub struct InitialData {
    pub name: &'static str,
    pub left: fn(f64) -> f64,
    pub right: fn(f64) -> f64,
    pub left_antiderivative: fn(f64) -> f64,
    pub right_antiderivative: fn(f64) -> f64,
    pub exact_mass: f64,
}

pub const INITIAL_DATA_NAMES: [&str; 3] = ["cosine", "piecewise", "sqrt"];

fn cosine(x: f64) -> f64 {
    (PI * x).cos() + 1.0
}

fn cosine_anti(x: f64) -> f64 {
    x + (PI * x).sin() / PI
}

fn sqrt_profile(x: f64) -> f64 {
    100.0 * (x * (1.0 - x)).sqrt()
}

fn sqrt_anti(x: f64) -> f64 {
    let s = 2.0 * x - 1.0;
    100.0 * (s * (x * (1.0 - x)).sqrt() / 4.0 + s.clamp(-1.0, 1.0).asin() / 8.0)
}

/// Looks up one of [`INITIAL_DATA_NAMES`].
pub fn initial_library(name: &str) -> Result<InitialData> {
    match name {
        "cosine" => Ok(InitialData {
            name: "cosine",
            left: cosine,
            right: cosine,
            left_antiderivative: cosine_anti,
            right_antiderivative: cosine_anti,
            exact_mass: 1.0,
        }),
        "piecewise" => Ok(InitialData {
            name: "piecewise",
            left: |_| 1.0,
            right: |_| 0.06,
            left_antiderivative: |x| x,
            right_antiderivative: |x| 0.06 * x,
            exact_mass: 0.53,
        }),
        "sqrt" => Ok(InitialData {
            name: "sqrt",
            left: sqrt_profile,
            right: sqrt_profile,
            left_antiderivative: sqrt_anti,
            right_antiderivative: sqrt_anti,
            exact_mass: 100.0 * PI / 8.0,
        }),
        other => Err(Error::UnknownInitialData(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{discretize_cell_averages, discretize_initial, Grid};

    #[test]
    fn nodal_mass_by_hand() {
        // smallest legal grid, m = 2: weights 1/2, 1, 1/2 | 1/2, 1, 1/2
        let g = Grid::new(2, Layout::Nodal).unwrap();
        let s = BiDomainState::new(g, vec![1.0, 2.0, 4.0], vec![3.0, 5.0, 6.0], 0.0).unwrap();
        let expected = 0.5 + 2.0 + 2.0 + 1.5 + 5.0 + 3.0;
        assert_eq!(mass_nodal(&s, Summation::Sequential).unwrap(), expected);
        assert_eq!(mass_nodal(&s, Summation::Compensated).unwrap(), expected);
    }

    #[test]
    fn weights_partition_unity() {
        for layout in [Layout::Nodal, Layout::FiniteVolume] {
            for m in [2, 3, 17, 100] {
                let g = Grid::new(m, layout).unwrap();
                let s = BiDomainState::constant(g, 1.0);
                let c = mass(&s, Summation::Sequential).unwrap();
                assert_eq!(c, g.n() as f64);
                assert_eq!(c * g.dx(), 1.0);
            }
        }
    }

    #[test]
    fn fv_mass_single_pair_and_layout_checks() {
        let g = Grid::new(2, Layout::FiniteVolume).unwrap();
        let s = BiDomainState::new(g, vec![0.25, 0.5], vec![2.0, 4.0], 0.0).unwrap();
        assert_eq!(mass_fv(&s, Summation::Sequential).unwrap(), 6.75);
        assert!(matches!(
            mass_nodal(&s, Summation::Sequential),
            Err(Error::LayoutMismatch { .. })
        ));
        let g = Grid::new(2, Layout::Nodal).unwrap();
        assert!(mass_fv(&BiDomainState::constant(g, 1.0), Summation::Sequential).is_err());
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let values = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(sum(values, Summation::Compensated), 2.0);
        assert_ne!(sum(values, Summation::Sequential), 2.0);
    }

    #[test]
    fn cosine_fine_mesh_initial_mass() {
        let g = Grid::new(5000, Layout::Nodal).unwrap();
        let data = initial_library("cosine").unwrap();
        let s = discretize_initial(g, data.left, data.right);
        let cbar = g.dx() * mass_nodal(&s, Summation::Sequential).unwrap();
        // reported value 1.000000000000001; last digits depend on summation order
        assert!((cbar - 1.000000000000001).abs() < 1e-14, "{cbar}");
    }

    #[test]
    fn piecewise_fine_mesh_initial_mass() {
        let g = Grid::new(50_000, Layout::FiniteVolume).unwrap();
        let data = initial_library("piecewise").unwrap();
        let s = discretize_initial(g, data.left, data.right);
        let compensated = g.dx() * mass_fv(&s, Summation::Compensated).unwrap();
        assert!((compensated - 0.5300000000000005).abs() < 1e-15, "{compensated}");
        // 10^5 sequential additions of 0.06 accumulate about 1e-12 of rounding
        let sequential = g.dx() * mass_fv(&s, Summation::Sequential).unwrap();
        assert!((sequential - 0.5300000000000005).abs() < 2e-12, "{sequential}");
    }

    #[test]
    fn library_masses() {
        assert_eq!(initial_library("cosine").unwrap().exact_mass, 1.0);
        assert_eq!(initial_library("piecewise").unwrap().exact_mass, 0.53);
        let sqrt = initial_library("sqrt").unwrap();
        assert!((sqrt.exact_mass - 39.269908169872415).abs() < 1e-14);
        assert!(matches!(
            initial_library("gaussian"),
            Err(Error::UnknownInitialData(_))
        ));
        for name in INITIAL_DATA_NAMES {
            let d = initial_library(name).unwrap();
            let total = (d.left_antiderivative)(0.5) - (d.left_antiderivative)(0.0)
                + (d.right_antiderivative)(1.0)
                - (d.right_antiderivative)(0.5);
            assert!((total - d.exact_mass).abs() < 1e-12, "{name}: {total}");
        }
    }

    #[test]
    fn exact_cell_averages_carry_exact_mass() {
        let d = initial_library("sqrt").unwrap();
        for layout in [Layout::Nodal, Layout::FiniteVolume] {
            let g = Grid::new(50, layout).unwrap();
            let s = discretize_cell_averages(g, d.left_antiderivative, d.right_antiderivative);
            let cbar = g.dx() * mass(&s, Summation::Compensated).unwrap();
            assert!((cbar - d.exact_mass).abs() < 1e-12, "{layout:?} {cbar}");
        }
    }

    #[test]
    fn sqrt_coarse_initial_mass() {
        let g = Grid::new(50, Layout::Nodal).unwrap();
        let d = initial_library("sqrt").unwrap();
        let s = discretize_initial(g, d.left, d.right);
        let cbar = g.dx() * mass(&s, Summation::Sequential).unwrap();
        assert!((cbar - 39.22835638873124).abs() < 1e-12, "{cbar}");
    }

    #[test]
    fn exact_solution_values() {
        let w = ExactSolution::new(1, 0.3);
        assert!((w.eval(0.5, 2.7) - 1.0).abs() < 1e-16);
        let t = 0.4;
        assert_eq!(w.eval(0.0, t), (-0.3 * PI * PI * t).exp() + 1.0);
        assert_eq!(w.eval(0.2, 1e4), 1.0);
    }

    #[test]
    fn error_metrics_zero_on_sampled_solution() {
        let w = ExactSolution::new(1, 1.0);
        let g = Grid::new(20, Layout::Nodal).unwrap();
        let mut s = discretize_initial(g, |x| w.eval(x, 0.05), |x| w.eval(x, 0.05));
        s.t = 0.05;
        let e = error_metrics(&s, &w);
        assert!(e.max < 1e-15 && e.l2 < 1e-15);
    }

    #[test]
    fn error_bounded_by_amplitude_for_constant_state() {
        let w = ExactSolution::new(1, 0.5);
        let g = Grid::new(16, Layout::FiniteVolume).unwrap();
        let mut s = BiDomainState::constant(g, 1.0);
        s.t = 2.0;
        let e = error_metrics(&s, &w);
        assert!(e.max <= (-0.5 * PI * PI * 2.0_f64).exp());
    }

    #[test]
    fn ledger_drift() {
        let mut l = MassLedger::new(Summation::Sequential, 0.5);
        assert_eq!(l.drift(), Err(Error::TooFewEntries(0)));
        for (i, c) in [2.0, 2.0, 2.0].into_iter().enumerate() {
            l.push(LedgerEntry { step: i as u64, t: i as f64, c }).unwrap();
        }
        let d = l.drift().unwrap();
        assert_eq!(d.per_interval, vec![0.0, 0.0]);
        assert_eq!(d.final_abs, 0.0);
        assert!(l.push(LedgerEntry { step: 1, t: 0.0, c: 1.0 }).is_err());
        assert!(l.push(LedgerEntry { step: 9, t: 0.0, c: f64::NAN }).is_err());
    }
}
