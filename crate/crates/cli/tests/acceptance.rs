//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::time::Instant;

use bicouple::runner::{Check, RunResult};
use bicouple::{execute_plan, Plan, Report};
use bicouple_core::conservation::{error_metrics, mass, ExactSolution, Summation};
use bicouple_core::stepper::interior_step;
use bicouple_core::{
    advance, discretize_initial, BiDomainState, ChannelParams, CouplingSpec, FluxStencil, Grid,
    Layout, MembraneParams, SchemeConfig, Simulation,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self {
            passed,
            detail: detail.into(),
        }
    }
}

fn run_preset(name: &str) -> Report {
    let plan = Plan::from_preset(name).expect("preset exists");
    execute_plan(&plan).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Evaluates the checks of `report` selected by `keep`.
fn verdicts(name: &str, report: &Report, keep: impl Fn(&Check) -> bool) -> Outcome {
    let plan = Plan::from_preset(name).unwrap();
    let selected: Vec<_> = plan
        .checks
        .iter()
        .filter(|c| keep(c))
        .map(|c| c.evaluate(&report.results))
        .collect();
    let failed: Vec<String> = selected
        .iter()
        .filter(|v| !v.passed)
        .map(|v| format!("{} (measured {})", v.check, v.measured))
        .collect();
    if failed.is_empty() {
        Outcome::new(true, format!("{name}: {} check(s)", selected.len()))
    } else {
        Outcome::new(false, format!("{name}: {}", failed.join("; ")))
    }
}

fn merge(parts: Vec<Outcome>) -> Outcome {
    Outcome::new(
        parts.iter().all(|p| p.passed),
        parts.into_iter().map(|p| p.detail).collect::<Vec<_>>().join(" | "),
    )
}

fn drift_of(results: &[RunResult], label: &str) -> f64 {
    results
        .iter()
        .find(|r| r.spec.label == label)
        .map(RunResult::abs_drift)
        .unwrap_or(f64::NAN)
}

fn continuity_check(c: &Check) -> bool {
    let is = |l: &str| l == "dn" || l == "giles";
    match c {
        Check::DriftWithin { run, .. } | Check::DriftAtMost { run, .. } => is(run),
        _ => false,
    }
}

fn criterion_1() -> Outcome {
    verdicts("fig4-fine", &run_preset("fig4-fine"), |c| !matches!(c, Check::InterfaceGap { .. }))
}

fn criterion_2(fig5: &Report, fig6: &Report) -> Outcome {
    let mut parts = vec![
        verdicts("fig5-piecewise", fig5, continuity_check),
        verdicts("fig6-fv", fig6, continuity_check),
    ];
    for name in ["fig5-piecewise-small", "fig6-fv-small"] {
        let start = Instant::now();
        let report = run_preset(name);
        let secs = start.elapsed().as_secs_f64();
        let mut o = verdicts(name, &report, |_| true);
        o.passed &= secs < 10.0;
        o.detail.push_str(&format!(" in {secs:.2} s"));
        parts.push(o);
    }
    let (nodal, fv) = (drift_of(&fig5.results, "dn"), drift_of(&fig6.results, "dn"));
    parts.push(Outcome::new(
        nodal >= 1e3 * fv,
        format!("full nodal-DN {nodal:e} vs FV-DN {fv:e}"),
    ));
    merge(parts)
}

fn criterion_3(fig5: &Report) -> Outcome {
    verdicts("fig5-piecewise", fig5, |c| !continuity_check(c))
}

fn criterion_4() -> Outcome {
    let coarse = |c: &Check| match c {
        Check::FinalMassWithin { run, .. } | Check::DriftWithin { run, .. } | Check::DriftAtMost { run, .. } => {
            run == "central" || run == "onesided"
        }
        _ => false,
    };
    verdicts("sqrt-boundary", &run_preset("sqrt-boundary"), coarse)
}

/// Textbook one-domain FTCS with ghost-value Neumann boundaries.
fn one_domain(mut w: Vec<f64>, nu: f64, steps: usize, boundary_factor: f64) -> Vec<f64> {
    let k = w.len() - 1;
    let mut next = w.clone();
    for _ in 0..steps {
        next[0] = w[0] + boundary_factor * nu * (w[1] - w[0]);
        for j in 1..k {
            next[j] = w[j] + nu * (w[j + 1] - w[j]) - nu * (w[j] - w[j - 1]);
        }
        next[k] = w[k] - boundary_factor * nu * (w[k] - w[k - 1]);
        std::mem::swap(&mut w, &mut next);
    }
    w
}

fn criterion_5() -> Outcome {
    let steps = 1000;
    let f = |x: f64| (std::f64::consts::PI * x).cos() + 1.0 + 0.3 * (7.0 * x).sin();
    let mut mismatches = Vec::new();
    for layout in [Layout::Nodal, Layout::FiniteVolume] {
        let g = Grid::new(50, layout).unwrap();
        let s = discretize_initial(g, f, f);
        let d = 0.3;
        let dt = 0.4 * g.dx() * g.dx() / d;
        let nu = d * dt / (g.dx() * g.dx());
        let (whole, factor) = match layout {
            Layout::Nodal => ([&s.u[..], &s.v[1..]].concat(), 2.0),
            Layout::FiniteVolume => ([&s.u[..], &s.v[..]].concat(), 1.0),
        };
        let reference = one_domain(whole, nu, steps, factor);
        let cfg = SchemeConfig::new(layout, d, d, dt, CouplingSpec::DirichletNeumann);
        let mut sim = Simulation::new(s, cfg).unwrap();
        for _ in 0..steps {
            sim.step().unwrap();
        }
        let out = sim.state();
        let skip = usize::from(layout == Layout::Nodal);
        let joined = [&out.u[..], &out.v[skip..]].concat();
        let differing = joined
            .iter()
            .zip(&reference)
            .filter(|(a, b)| a.to_bits() != b.to_bits())
            .count();
        if differing > 0 || joined.len() != reference.len() {
            mismatches.push(format!("{layout:?}: {differing} entries differ"));
        }
    }
    Outcome::new(
        mismatches.is_empty(),
        if mismatches.is_empty() {
            format!("nodal and FV bit-identical over {steps} steps")
        } else {
            mismatches.join(", ")
        },
    )
}

fn criterion_6() -> Outcome {
    let exact = ExactSolution::new(1, 1.0);
    let errors: Vec<f64> = [10usize, 20, 40, 80]
        .iter()
        .map(|&m| {
            let g = Grid::new(m, Layout::Nodal).unwrap();
            let s = discretize_initial(g, |x| exact.eval(x, 0.0), |x| exact.eval(x, 0.0));
            let dt = 0.4 * g.dx() * g.dx();
            let cfg = SchemeConfig::new(Layout::Nodal, 1.0, 1.0, dt, CouplingSpec::DirichletNeumann);
            let mut sim = Simulation::new(s, cfg).unwrap();
            for _ in 0..(0.05 / dt).round() as u64 {
                sim.step().unwrap();
            }
            error_metrics(sim.state(), &exact).max
        })
        .collect();
    let ratios: Vec<f64> = errors.windows(2).map(|w| w[0] / w[1]).collect();
    Outcome::new(
        ratios.iter().all(|r| (r - 4.0).abs() <= 0.3),
        format!("max-norm ratios {ratios:.3?}"),
    )
}

fn ulp(x: f64) -> f64 {
    let a = x.abs();
    a.next_up() - a
}

fn conservative_configs() -> Vec<(Layout, CouplingSpec)> {
    let fluxes = |stencil| {
        vec![
            CouplingSpec::heat(1.0, stencil),
            CouplingSpec::heat(0.1, stencil),
            CouplingSpec::channel(ChannelParams::reference(), stencil),
            CouplingSpec::membrane(MembraneParams::reference(), stencil),
        ]
    };
    let mut out = vec![
        (Layout::Nodal, CouplingSpec::DirichletNeumann),
        (Layout::Nodal, CouplingSpec::GilesCorrect { r: 1.0 }),
        (Layout::FiniteVolume, CouplingSpec::DirichletNeumann),
    ];
    out.extend(fluxes(FluxStencil::Central).into_iter().map(|c| (Layout::Nodal, c)));
    out.extend(fluxes(FluxStencil::OneSided).into_iter().map(|c| (Layout::FiniteVolume, c)));
    out
}

fn random_state(layout: Layout, m: usize, pool: &[f64], continuous: bool) -> BiDomainState {
    let g = Grid::new(m, layout).unwrap();
    let len = g.side_len();
    let mut s = BiDomainState::new(g, pool[..len].to_vec(), pool[len..2 * len].to_vec(), 0.0).unwrap();
    if continuous && layout == Layout::Nodal {
        s.v[0] = s.u[len - 1];
    }
    s
}

fn pool_strategy(max_m: usize) -> impl Strategy<Value = (usize, Vec<f64>)> {
    (2..=max_m).prop_flat_map(|m| (Just(m), prop::collection::vec(0.5f64..=1.0, 2 * (m + 1))))
}

/// Partial weighted sums of the increments must reproduce the face fluxes of
/// the old state; the total is then zero.
fn telescoping_defect(layout: Layout, coupling: &CouplingSpec) -> f64 {
    let g = Grid::new(3, layout).unwrap();
    let len = g.side_len();
    let pick = |k: usize| 0.55 + 0.4 * ((k * 7919) % 13) as f64 / 13.0;
    let mut s = BiDomainState::new(
        g,
        (0..len).map(pick).collect(),
        (len..2 * len).map(pick).collect(),
        0.0,
    )
    .unwrap();
    if layout == Layout::Nodal && coupling.imposes_continuity() {
        s.v[0] = s.u[len - 1];
    }
    let cfg = SchemeConfig::new(layout, 0.05, 0.1, 0.01, *coupling);
    let next = advance(&s, &cfg).unwrap();
    let (nm, np) = (cfg.nu_minus(g.dx()), cfg.nu_plus(g.dx()));
    let (u, v) = (&s.u, &s.v);
    let iface = match coupling {
        CouplingSpec::Flux { flux, .. } => -cfg.dt / g.dx() * flux.eval(u[len - 1], v[0]).unwrap(),
        _ if layout == Layout::Nodal => 0.5 * (nm * (u[len - 1] - u[len - 2]) + np * (v[1] - v[0])),
        _ => np * (v[0] - u[len - 1]),
    };
    let mut faces: Vec<f64> = (0..len - 1).map(|j| nm * (u[j + 1] - u[j])).collect();
    faces.push(iface);
    faces.extend((0..len - 1).map(|j| np * (v[j + 1] - v[j])));
    faces.push(0.0);
    let half = |i: usize| layout == Layout::Nodal && (i == 0 || i == len - 1);
    let increments = (0..len)
        .map(|i| (next.u[i] - u[i]) * if half(i) { 0.5 } else { 1.0 })
        .chain((0..len).map(|i| (next.v[i] - v[i]) * if half(i) { 0.5 } else { 1.0 }));
    let mut partial = 0.0;
    let mut worst: f64 = 0.0;
    for (inc, face) in increments.zip(faces) {
        partial += inc;
        worst = worst.max((partial - face).abs());
    }
    worst
}

fn criterion_7() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    let runner = |cases: u32| TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });

    // constant state, every scheme and coupling
    let mut all = conservative_configs();
    all.push((Layout::Nodal, CouplingSpec::GilesInconsistent { r: 1.0 }));
    all.push((Layout::FiniteVolume, CouplingSpec::GilesInconsistent { r: 1.0 }));
    all.push((Layout::Nodal, CouplingSpec::GilesCorrect { r: 3.0 }));
    for c in [CouplingSpec::heat(0.4, FluxStencil::OneSided), CouplingSpec::general(0.2, 1.0, FluxStencil::Central)] {
        all.push((Layout::Nodal, c));
    }
    let fixed = all.iter().all(|(layout, c)| {
        [0.0, 1.0, 0.37, -2.5].iter().all(|&value| {
            let g = Grid::new(4, *layout).unwrap();
            let s = BiDomainState::constant(g, value);
            let vanishes = match c {
                CouplingSpec::Flux { flux, .. } => flux.eval(value, value) == Ok(0.0),
                _ => true,
            };
            let cfg = SchemeConfig::new(*layout, 0.3, 0.45, g.dx() * g.dx(), *c);
            !vanishes || advance(&s, &cfg).is_ok_and(|n| n.u == s.u && n.v == s.v)
        })
    });
    ok &= fixed;
    notes.push(format!("fixed point {}", if fixed { "ok" } else { "FAILED" }));

    let giles = runner(500).run(
        &(pool_strategy(6), 0.01f64..=0.25, 0.01f64..=0.25),
        |((m, pool), nm, np)| {
            for layout in [Layout::Nodal, Layout::FiniteVolume] {
                let s = random_state(layout, m, &pool, true);
                let cfg = SchemeConfig::new(layout, nm, np, s.grid.dx() * s.grid.dx(), CouplingSpec::GilesInconsistent { r: 1.0 });
                let next = advance(&s, &cfg).unwrap();
                let (c0, c1) = (mass(&s, Summation::Compensated).unwrap(), mass(&next, Summation::Compensated).unwrap());
                let k = s.u.len() - 1;
                let v_next = if layout == Layout::Nodal { s.v[1] } else { s.v[0] };
                let expected = -nm * (s.u[k] - s.u[k - 1]) + np * (v_next - s.u[k]);
                prop_assert!(((c1 - c0) - expected).abs() <= 8.0 * ulp(c0.max(c1)));
            }
            Ok(())
        },
    );
    ok &= giles.is_ok();
    notes.push(format!("Giles identity {}", if giles.is_ok() { "ok" } else { "FAILED" }));

    let configs = conservative_configs();
    let conservation = runner(1000).run(
        &(pool_strategy(8), 0.01f64..=0.5, 0.01f64..=0.5),
        |((m, pool), nm, np)| {
            for (layout, c) in &configs {
                let s = random_state(*layout, m, &pool, c.imposes_continuity());
                let cfg = SchemeConfig::new(*layout, nm, np, s.grid.dx() * s.grid.dx(), *c);
                let next = advance(&s, &cfg).unwrap();
                let (c0, c1) = (mass(&s, Summation::Sequential).unwrap(), mass(&next, Summation::Sequential).unwrap());
                prop_assert!((c1 - c0).abs() <= 64.0 * s.grid.n() as f64 * ulp(c0.max(c1)), "{}", c.label());
            }
            Ok(())
        },
    );
    ok &= conservation.is_ok();
    notes.push(format!(
        "conservation over 1000 random steps x {} configs {}",
        configs.len(),
        if conservation.is_ok() { "ok" } else { "FAILED" }
    ));

    let maximum = runner(2000).run(
        &(-1.0f64..=1.0, -1.0f64..=1.0, -1.0f64..=1.0, 0.0f64..=0.5),
        |(l, c, r, nu)| {
            let w = interior_step(l, c, r, nu);
            let slack = 4.0 * f64::EPSILON;
            prop_assert!(w <= l.max(c).max(r) + slack && w >= l.min(c).min(r) - slack);
            Ok(())
        },
    );
    ok &= maximum.is_ok();
    notes.push(format!("maximum principle {}", if maximum.is_ok() { "ok" } else { "FAILED" }));

    let worst = configs
        .iter()
        .map(|(layout, c)| telescoping_defect(*layout, c))
        .fold(0.0, f64::max);
    ok &= worst <= 1e-15;
    notes.push(format!("6-cell telescoping defect {worst:e}"));

    Outcome::new(ok, notes.join(", "))
}

fn criterion_8() -> Outcome {
    verdicts("fig2", &run_preset("fig2"), |c| matches!(c, Check::InterfaceGap { .. }))
}

type Criterion<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn main() {
    let start = Instant::now();
    let fig5 = run_preset("fig5-piecewise");
    let fig6 = run_preset("fig6-fv");
    let criteria: Vec<(&str, Criterion)> = vec![
        ("conservation, fine mesh", Box::new(criterion_1)),
        ("discontinuous-data contrast", Box::new(|| criterion_2(&fig5, &fig6))),
        ("non-conservative flux couplings", Box::new(|| criterion_3(&fig5))),
        ("boundary treatment", Box::new(criterion_4)),
        ("single-domain equivalence", Box::new(criterion_5)),
        ("second-order convergence", Box::new(criterion_6)),
        ("property suites", Box::new(criterion_7)),
        ("interface value", Box::new(criterion_8)),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        failures += usize::from(!o.passed);
        println!(
            "criterion {}: {} - {name}: {}",
            i + 1,
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!(
        "acceptance: {}/{} passed in {:.1} s",
        criteria.len() - failures,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
