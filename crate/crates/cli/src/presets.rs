//! Frozen experiment definitions with their expected outcomes.

use bicouple_core::stepper::BoundaryTreatment;
use bicouple_core::{ChannelParams, CouplingSpec, FluxStencil, Layout, MembraneParams};

use crate::config::{RunConfig, RunSpec};
use crate::error::ConfigError;
use crate::runner::Check;

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub runs: Vec<RunConfig>,
    pub checks: Vec<Check>,
}

impl Preset {
    pub fn specs(&self) -> Result<Vec<RunSpec>, ConfigError> {
        self.runs.iter().map(RunConfig::resolve).collect()
    }
}

pub const PRESET_NAMES: [&str; 8] = [
    "fig2",
    "fig3-negative",
    "fig4-fine",
    "fig5-piecewise",
    "fig5-piecewise-small",
    "fig6-fv",
    "fig6-fv-small",
    "sqrt-boundary",
];

pub fn preset(name: &str) -> Result<Preset, ConfigError> {
    let p = match name {
        "fig2" => fig2(),
        "fig3-negative" => fig3_negative(),
        "fig4-fine" => fig4_fine(),
        "fig5-piecewise" => fig5_piecewise(),
        "fig5-piecewise-small" => fig5_piecewise_small(),
        "fig6-fv" => fig6_fv(),
        "fig6-fv-small" => fig6_fv_small(),
        "sqrt-boundary" => sqrt_boundary(),
        other => return Err(ConfigError::UnknownPreset(other.to_string())),
    };
    Ok(p)
}

pub fn all_presets() -> Vec<Preset> {
    PRESET_NAMES
        .iter()
        .map(|n| preset(n).expect("listed presets exist"))
        .collect()
}

struct Mesh {
    layout: Layout,
    m: usize,
    dt: f64,
    n_steps: u64,
    initial: &'static str,
    d: (f64, f64),
}

impl Mesh {
    fn run(&self, coupling: CouplingSpec) -> RunConfig {
        RunConfig {
            scheme: Some(self.layout),
            d_minus: Some(self.d.0),
            d_plus: Some(self.d.1),
            m: Some(self.m),
            dt: Some(self.dt),
            n_steps: Some(self.n_steps),
            coupling: Some(coupling),
            initial_data: Some(self.initial.into()),
            audit_every: Some((self.n_steps / 100).max(1)),
            ..Default::default()
        }
    }

    fn labelled(&self, label: &str, coupling: CouplingSpec) -> RunConfig {
        RunConfig {
            label: Some(label.into()),
            ..self.run(coupling)
        }
    }
}

fn continuity() -> [CouplingSpec; 2] {
    [
        CouplingSpec::DirichletNeumann,
        CouplingSpec::GilesInconsistent { r: 1.0 },
    ]
}

/// Heat H = 1, heat H = 0.1, channel and membrane fluxes, optionally negated.
fn biophysical(stencil: FluxStencil, sign: f64) -> [CouplingSpec; 4] {
    let mut channel = ChannelParams::reference();
    channel.psi *= sign;
    let mut membrane = MembraneParams::reference();
    membrane.p_leak *= sign;
    [
        CouplingSpec::heat(sign, stencil),
        CouplingSpec::heat(0.1 * sign, stencil),
        CouplingSpec::channel(channel, stencil),
        CouplingSpec::membrane(membrane, stencil),
    ]
}

fn at_most(run: impl Into<String>, bound: f64) -> Check {
    Check::DriftAtMost {
        run: run.into(),
        bound,
    }
}

fn within(run: &str, expected: f64, tol: f64) -> Check {
    Check::DriftWithin {
        run: run.into(),
        expected,
        tol,
    }
}

fn six_nodal(mesh: &Mesh) -> Vec<RunConfig> {
    continuity()
        .into_iter()
        .chain(biophysical(FluxStencil::Central, 1.0))
        .map(|c| mesh.run(c))
        .collect()
}

fn fig2() -> Preset {
    let mesh = Mesh {
        layout: Layout::Nodal,
        m: 50,
        dt: 4e-5,
        n_steps: 3000,
        initial: "cosine",
        d: (0.1, 1.0),
    };
    Preset {
        name: "fig2",
        description: "six nodal couplings, cosine data, dx = 0.01, 3000 steps",
        runs: six_nodal(&mesh),
        checks: vec![Check::InterfaceGap {
            a: "dn".into(),
            b: "giles".into(),
            expected: 2.730344211099967e-3,
            tol: 1e-6,
        }],
    }
}

fn fig3_negative() -> Preset {
    let negative = biophysical(FluxStencil::Central, -1.0);
    let mut runs = Vec::new();
    let mut checks = Vec::new();
    for initial in ["cosine", "piecewise"] {
        let mesh = Mesh {
            layout: Layout::Nodal,
            m: 50_000,
            dt: 4e-11,
            n_steps: 1_000_000,
            initial,
            d: (0.1, 1.0),
        };
        for c in &negative {
            let label = format!("{initial}-{}", c.label());
            checks.push(at_most(label.clone(), 1e-10));
            runs.push(mesh.labelled(&label, *c));
        }
    }
    Preset {
        name: "fig3-negative",
        description: "negated heat, channel and membrane coefficients; cosine and piecewise data, dx = 1e-5, 1e6 steps",
        runs,
        checks,
    }
}

fn fig4_fine() -> Preset {
    let mesh = Mesh {
        layout: Layout::Nodal,
        m: 5000,
        dt: 4e-9,
        n_steps: 100_000,
        initial: "cosine",
        d: (0.1, 1.0),
    };
    let runs = six_nodal(&mesh);
    let mut checks: Vec<Check> = runs
        .iter()
        .filter_map(|r| r.coupling.as_ref().map(CouplingSpec::label))
        .filter(|l| l != "giles")
        .map(|l| at_most(l, 1e-11))
        .collect();
    checks.push(within("giles", 2.420965528937558e-6, 1e-8));
    checks.push(Check::InterfaceGap {
        a: "dn".into(),
        b: "giles".into(),
        expected: 8.133493461626173e-5,
        tol: 1e-9,
    });
    Preset {
        name: "fig4-fine",
        description: "six nodal couplings, cosine data, dx = 1e-4, 1e5 steps",
        runs,
        checks,
    }
}

fn piecewise_mesh(layout: Layout, m: usize, n_steps: u64) -> Mesh {
    Mesh {
        layout,
        m,
        dt: 0.4 / (4.0 * (m * m) as f64),
        n_steps,
        initial: "piecewise",
        d: (0.1, 1.0),
    }
}

fn fig5_piecewise() -> Preset {
    let mut mesh = piecewise_mesh(Layout::Nodal, 50_000, 1_000_000);
    mesh.dt = 4e-11;
    let central = biophysical(FluxStencil::Central, 1.0);
    let onesided = biophysical(FluxStencil::OneSided, 1.0);
    let mut runs: Vec<RunConfig> = continuity().into_iter().map(|c| mesh.run(c)).collect();
    for (c, o) in central.iter().zip(&onesided) {
        runs.push(mesh.run(*c));
        runs.push(mesh.run(*o));
    }
    let mut checks = vec![
        within("dn", 9.399993379233251e-7, 1e-8),
        within("giles", 2.631702722744045e-6, 1e-7),
    ];
    // heat, heat, channel, membrane
    let orders = [1e-8, 1e-8, 1e-10, 1e-9];
    for ((c, o), order) in central.iter().zip(&onesided).zip(orders) {
        checks.push(at_most(c.label(), 1e-11));
        checks.push(Check::DriftOrder {
            run: o.label(),
            order,
            decades: 1.0,
        });
        checks.push(Check::DriftRatio {
            larger: o.label(),
            smaller: c.label(),
            factor: 10.0,
        });
    }
    Preset {
        name: "fig5-piecewise",
        description: "nodal couplings incl. one-sided fluxes, piecewise data, dx = 1e-5, 1e6 steps",
        runs,
        checks,
    }
}

fn fig6_fv() -> Preset {
    let mut mesh = piecewise_mesh(Layout::FiniteVolume, 50_000, 1_000_000);
    mesh.dt = 4e-11;
    let runs: Vec<RunConfig> = continuity()
        .into_iter()
        .chain(biophysical(FluxStencil::OneSided, 1.0))
        .map(|c| mesh.run(c))
        .collect();
    let mut checks = vec![
        at_most("dn", 1e-10),
        within("giles", 3.570_428_568_577_81e-6, 1e-7),
    ];
    for c in biophysical(FluxStencil::OneSided, 1.0) {
        checks.push(at_most(c.label(), 1e-10));
    }
    Preset {
        name: "fig6-fv",
        description: "finite-volume couplings, piecewise data, dx = 1e-5, 1e6 steps",
        runs,
        checks,
    }
}

fn fig5_piecewise_small() -> Preset {
    let nodal = piecewise_mesh(Layout::Nodal, 500, 10_000);
    let fv = piecewise_mesh(Layout::FiniteVolume, 500, 10_000);
    Preset {
        name: "fig5-piecewise-small",
        description: "nodal vs finite-volume Dirichlet-Neumann on piecewise data, dx = 1e-3, 1e4 steps",
        runs: vec![
            nodal.labelled("nodal-dn", CouplingSpec::DirichletNeumann),
            fv.labelled("fv-dn", CouplingSpec::DirichletNeumann),
        ],
        checks: vec![Check::DriftRatio {
            larger: "nodal-dn".into(),
            smaller: "fv-dn".into(),
            factor: 1e3,
        }],
    }
}

fn fig6_fv_small() -> Preset {
    let fv = piecewise_mesh(Layout::FiniteVolume, 500, 10_000);
    Preset {
        name: "fig6-fv-small",
        description: "finite-volume Dirichlet-Neumann vs Giles on piecewise data, dx = 1e-3, 1e4 steps",
        runs: continuity().into_iter().map(|c| fv.run(c)).collect(),
        checks: vec![Check::DriftRatio {
            larger: "giles".into(),
            smaller: "dn".into(),
            factor: 1e3,
        }],
    }
}

fn sqrt_boundary() -> Preset {
    let coarse = Mesh {
        layout: Layout::Nodal,
        m: 50,
        dt: 0.04,
        n_steps: 500,
        initial: "sqrt",
        d: (0.001, 0.001),
    };
    let fine = Mesh {
        m: 500,
        dt: 4e-4,
        n_steps: 50_000,
        ..coarse
    };
    let with = |mesh: &Mesh, label: &str, boundary| RunConfig {
        boundary: Some(boundary),
        ..mesh.labelled(label, CouplingSpec::DirichletNeumann)
    };
    let mass = |run: &str, expected, tol| Check::FinalMassWithin {
        run: run.into(),
        expected,
        tol,
    };
    Preset {
        name: "sqrt-boundary",
        description: "single domain, sqrt data, central vs one-sided Neumann boundaries, dx = 0.01 and 0.001",
        runs: vec![
            with(&coarse, "central", BoundaryTreatment::CentralGhost),
            with(&coarse, "onesided", BoundaryTreatment::OneSidedGhost),
            with(&fine, "fine-central", BoundaryTreatment::CentralGhost),
            with(&fine, "fine-onesided", BoundaryTreatment::OneSidedGhost),
        ],
        checks: vec![
            mass("central", 39.22835638873113, 1e-10),
            at_most("central", 1e-12),
            mass("onesided", 38.91134647144038, 1e-9),
            within("onesided", 0.3170099172908607, 1e-6),
            mass("fine-central", 39.26859346251628, 1e-9),
            at_most("fine-central", 1e-10),
            mass("fine-onesided", 39.236_096_302_514_1, 1e-9),
            within("fine-onesided", 0.03249716001266023, 1e-6),
        ],
    }
}
