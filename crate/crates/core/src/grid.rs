//! Uniform bi-domain mesh on [0, 1] with the interface at x = 1/2.
//!
//! Two layouts share the same storage shape. In the nodal layout the left
//! field holds `u_0..=u_m` and the right field holds `v_m..=v_N`, so the
//! interface coordinate carries a double node. In the finite-volume layout
//! the left field holds cell values `u_1..=u_m`, the right field holds
//! `v_{m+1}..=v_N`, and the interface is the face between cells `m` and
//! `m + 1`. In both layouts the interface entry is the last entry of `u` and
//! the first entry of `v`, and the outer boundary entries are `u[0]` and
//! `v[last]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layout {
    Nodal,
    FiniteVolume,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    m: usize,
    layout: Layout,
}

impl Grid {
    pub fn new(m: usize, layout: Layout) -> Result<Self> {
        if m < 2 {
            return Err(Error::MeshTooCoarse { m });
        }
        Ok(Self { m, layout })
    }

    /// Cells (or nodes) per sub-domain.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        2 * self.m
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn dx(&self) -> f64 {
        1.0 / self.n() as f64
    }

    /// Number of stored entries on each side.
    pub fn side_len(&self) -> usize {
        match self.layout {
            Layout::Nodal => self.m + 1,
            Layout::FiniteVolume => self.m,
        }
    }

    /// Coordinates of the left entries (`u`).
    pub fn left_coords(&self) -> Vec<f64> {
        let dx = self.dx();
        match self.layout {
            Layout::Nodal => (0..=self.m).map(|j| j as f64 * dx).collect(),
            Layout::FiniteVolume => (1..=self.m).map(|j| (j as f64 - 0.5) * dx).collect(),
        }
    }

    /// Coordinates of the right entries (`v`).
    pub fn right_coords(&self) -> Vec<f64> {
        let dx = self.dx();
        match self.layout {
            Layout::Nodal => (self.m..=self.n()).map(|j| j as f64 * dx).collect(),
            Layout::FiniteVolume => (self.m + 1..=self.n())
                .map(|j| (j as f64 - 0.5) * dx)
                .collect(),
        }
    }

    /// Control-volume edges `(a, b)` for each left entry. Nodal boundary and
    /// interface nodes own half cells.
    fn left_cells(&self) -> Vec<(f64, f64)> {
        let dx = self.dx();
        self.left_coords()
            .into_iter()
            .map(|x| match self.layout {
                Layout::FiniteVolume => (x - 0.5 * dx, x + 0.5 * dx),
                Layout::Nodal => ((x - 0.5 * dx).max(0.0), (x + 0.5 * dx).min(0.5)),
            })
            .collect()
    }

    fn right_cells(&self) -> Vec<(f64, f64)> {
        let dx = self.dx();
        self.right_coords()
            .into_iter()
            .map(|x| match self.layout {
                Layout::FiniteVolume => (x - 0.5 * dx, x + 0.5 * dx),
                Layout::Nodal => ((x - 0.5 * dx).max(0.5), (x + 0.5 * dx).min(1.0)),
            })
            .collect()
    }
}

/// Discrete fields `u` (left) and `v` (right) at one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct BiDomainState {
    pub grid: Grid,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub t: f64,
}

impl BiDomainState {
    pub fn new(grid: Grid, u: Vec<f64>, v: Vec<f64>, t: f64) -> Result<Self> {
        let state = Self { grid, u, v, t };
        state.validate()?;
        Ok(state)
    }

    pub fn constant(grid: Grid, value: f64) -> Self {
        let len = grid.side_len();
        Self {
            grid,
            u: vec![value; len],
            v: vec![value; len],
            t: 0.0,
        }
    }

    pub fn layout(&self) -> Layout {
        self.grid.layout()
    }

    pub fn validate(&self) -> Result<()> {
        let len = self.grid.side_len();
        if self.u.len() != len || self.v.len() != len {
            return Err(Error::MalformedState(format!(
                "expected {len} entries per side, got u: {}, v: {}",
                self.u.len(),
                self.v.len()
            )));
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.u.iter().chain(&self.v).all(|x| x.is_finite())
    }

    /// Affine combination `a * self + b * other` of two states on the same grid.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::MalformedState("grids differ".into()));
        }
        let mix = |x: &[f64], y: &[f64]| -> Vec<f64> {
            x.iter().zip(y).map(|(p, q)| a * p + b * q).collect()
        };
        Ok(Self {
            grid: self.grid,
            u: mix(&self.u, &other.u),
            v: mix(&self.v, &other.v),
            t: self.t,
        })
    }
}

/// Samples initial data. Nodal: point values, with `u_m = f_left(1/2)` and
/// `v_m = f_right(1/2)`. Finite volume: midpoint rule for cell averages.
pub fn discretize_initial<L, R>(grid: Grid, f_left: L, f_right: R) -> BiDomainState
where
    L: Fn(f64) -> f64,
    R: Fn(f64) -> f64,
{
    BiDomainState {
        grid,
        u: grid.left_coords().into_iter().map(f_left).collect(),
        v: grid.right_coords().into_iter().map(f_right).collect(),
        t: 0.0,
    }
}

/// Exact control-volume averages from antiderivatives of the initial data.
pub fn discretize_cell_averages<L, R>(grid: Grid, anti_left: L, anti_right: R) -> BiDomainState
where
    L: Fn(f64) -> f64,
    R: Fn(f64) -> f64,
{
    let average = |(a, b): (f64, f64), anti: &dyn Fn(f64) -> f64| (anti(b) - anti(a)) / (b - a);
    BiDomainState {
        grid,
        u: grid
            .left_cells()
            .into_iter()
            .map(|c| average(c, &anti_left))
            .collect(),
        v: grid
            .right_cells()
            .into_iter()
            .map(|c| average(c, &anti_right))
            .collect(),
        t: 0.0,
    }
}
