//! Interface flux models.
//!
//! Every function returns the flux `J(u, v)` with the convention
//! `D_- u_x = D_+ v_x = -J(u, v)` at the interface, where `u` is the left
//! interface value and `v` the right one. A positive `J` moves mass from the
//! left sub-domain into the right one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default guard on the channel flux denominator.
pub const CHANNEL_DENOMINATOR_EPS: f64 = 1e-30;

/// `J_heat(u, v) = H (u - v)`.
#[inline]
pub fn heat_flux(u: f64, v: f64, h: f64) -> f64 {
    h * (u - v)
}

/// `J_gen(u, v) = -H (theta v - u)`. Reduces to [`heat_flux`] bit for bit when
/// `theta == 1`.
#[inline]
pub fn general_flux(u: f64, v: f64, h: f64, theta: f64) -> f64 {
    -h * (theta * v - u)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    pub psi: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    #[serde(default = "default_channel_eps")]
    pub epsilon: f64,
}

fn default_channel_eps() -> f64 {
    CHANNEL_DENOMINATOR_EPS
}

impl ChannelParams {
    /// Channel cluster constants used in the reference computations.
    pub fn reference() -> Self {
        Self {
            psi: 9.3954e-7,
            alpha: 1.497,
            beta: 1.1949e-4,
            gamma: 1.1556e-7,
            delta: 1.1444e-7,
            epsilon: CHANNEL_DENOMINATOR_EPS,
        }
    }
}

/// `J_ch(u, v) = Psi (u - alpha v) / (beta + gamma u + delta v)`.
pub fn channel_flux(u: f64, v: f64, p: &ChannelParams) -> Result<f64> {
    let denominator = p.beta + p.gamma * u + p.delta * v;
    if denominator.abs() < p.epsilon || !denominator.is_finite() {
        return Err(Error::ChannelDenominatorDegenerate {
            denominator,
            epsilon: p.epsilon,
        });
    }
    Ok(p.psi * (u - p.alpha * v) / denominator)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MembraneParams {
    pub p_leak: f64,
    pub p_pump: f64,
    pub k_d: f64,
}

impl MembraneParams {
    pub fn reference() -> Self {
        Self {
            p_leak: 0.02,
            p_pump: 1.0,
            k_d: 0.2,
        }
    }
}

/// `J_pump(u, v) = P_l (u - v) - P_p v^2 / (K_d^2 + v^2)`, with `u` the
/// store-side concentration and `v` the cytosolic one.
pub fn membrane_flux(u: f64, v: f64, p: &MembraneParams) -> Result<f64> {
    let v2 = v * v;
    let denominator = p.k_d * p.k_d + v2;
    if denominator == 0.0 {
        return Err(Error::MembraneFluxSingular);
    }
    Ok(p.p_leak * (u - v) - p.p_pump * v2 / denominator)
}

/// A flux law with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InterfaceFlux {
    Heat { h: f64 },
    General { h: f64, theta: f64 },
    Channel(ChannelParams),
    Membrane(MembraneParams),
}

impl InterfaceFlux {
    pub fn eval(&self, u: f64, v: f64) -> Result<f64> {
        match self {
            Self::Heat { h } => Ok(heat_flux(u, v, *h)),
            Self::General { h, theta } => Ok(general_flux(u, v, *h, *theta)),
            Self::Channel(p) => channel_flux(u, v, p),
            Self::Membrane(p) => membrane_flux(u, v, p),
        }
    }

    /// True when the flux is affine in `(u, v)`.
    pub fn is_linear(&self) -> bool {
        matches!(self, Self::Heat { .. } | Self::General { .. })
    }

    fn validate(&self) -> Result<()> {
        match self {
            Self::Membrane(p) if p.k_d == 0.0 => Err(Error::InvalidPhysicalParameters(
                "membrane flux needs K_d != 0".into(),
            )),
            Self::Channel(p) if p.epsilon < 0.0 => Err(Error::InvalidPhysicalParameters(
                "channel denominator guard must be nonnegative".into(),
            )),
            _ => Ok(()),
        }
    }

    fn label(&self) -> String {
        match self {
            Self::Heat { h } => format!("heat-h{h}"),
            Self::General { h, theta } => format!("general-h{h}-theta{theta}"),
            Self::Channel(_) => "channel".into(),
            Self::Membrane(_) => "membrane".into(),
        }
    }
}

/// How the ghost values of a flux coupling are eliminated on the nodal mesh.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FluxStencil {
    /// Central difference about the interface node; conservative on the
    /// nodal layout.
    Central,
    /// One-sided difference; the conservative choice on the finite-volume
    /// layout, non-conservative on the nodal one.
    OneSided,
}

/// Interface coupling condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CouplingSpec {
    DirichletNeumann,
    /// Interface update with the spurious factor 2 (loses conservation).
    GilesInconsistent {
        #[serde(default = "unit_ratio")]
        r: f64,
    },
    /// Corrected interface update; equals Dirichlet-Neumann for `r = 1`.
    GilesCorrect {
        #[serde(default = "unit_ratio")]
        r: f64,
    },
    Flux {
        flux: InterfaceFlux,
        stencil: FluxStencil,
    },
}

fn unit_ratio() -> f64 {
    1.0
}

impl CouplingSpec {
    pub fn heat(h: f64, stencil: FluxStencil) -> Self {
        Self::Flux {
            flux: InterfaceFlux::Heat { h },
            stencil,
        }
    }

    pub fn general(h: f64, theta: f64, stencil: FluxStencil) -> Self {
        Self::Flux {
            flux: InterfaceFlux::General { h, theta },
            stencil,
        }
    }

    pub fn channel(params: ChannelParams, stencil: FluxStencil) -> Self {
        Self::Flux {
            flux: InterfaceFlux::Channel(params),
            stencil,
        }
    }

    pub fn membrane(params: MembraneParams, stencil: FluxStencil) -> Self {
        Self::Flux {
            flux: InterfaceFlux::Membrane(params),
            stencil,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::GilesCorrect { r } | Self::GilesInconsistent { r } if r.is_nan() || *r <= 0.0 => {
                Err(Error::InvalidRatio(*r))
            }
            Self::Flux { flux, .. } => flux.validate(),
            _ => Ok(()),
        }
    }

    /// Couplings that impose `u_m = v_m` after each step.
    pub fn imposes_continuity(&self) -> bool {
        !matches!(self, Self::Flux { .. })
    }

    /// File-name friendly identifier, e.g. `heat-h0.1-central`.
    pub fn label(&self) -> String {
        match self {
            Self::DirichletNeumann => "dn".into(),
            Self::GilesInconsistent { r } if *r == 1.0 => "giles".into(),
            Self::GilesInconsistent { r } => format!("giles-r{r}"),
            Self::GilesCorrect { r } => format!("giles-correct-r{r}"),
            Self::Flux { flux, stencil } => {
                let stencil = match stencil {
                    FluxStencil::Central => "central",
                    FluxStencil::OneSided => "onesided",
                };
                format!("{}-{stencil}", flux.label())
            }
        }
    }
}
