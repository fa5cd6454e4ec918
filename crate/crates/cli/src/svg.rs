//! Static overlay plot of final profiles, one polyline per field.

use std::fmt::Write as _;

use crate::runner::RunResult;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN: f64 = 60.0;
const MAX_POINTS: usize = 2000;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

/// Every `k`-th point plus the last one, so long fields stay readable.
fn thin(xs: &[f64], ys: &[f64]) -> Vec<(f64, f64)> {
    let stride = xs.len().div_ceil(MAX_POINTS).max(1);
    let mut pts: Vec<(f64, f64)> = xs.iter().zip(ys).step_by(stride).map(|(x, y)| (*x, *y)).collect();
    if !(xs.len() - 1).is_multiple_of(stride) {
        pts.push((xs[xs.len() - 1], ys[ys.len() - 1]));
    }
    pts
}

pub fn profile_plot(results: &[RunResult]) -> String {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for r in results {
        for &y in r.final_state.u.iter().chain(&r.final_state.v) {
            lo = lo.min(y);
            hi = hi.max(y);
        }
    }
    if hi <= lo || !hi.is_finite() {
        hi = lo + 1.0;
    }
    let px = |x: f64| MARGIN + x * (WIDTH - 2.0 * MARGIN);
    let py = |y: f64| HEIGHT - MARGIN - (y - lo) / (hi - lo) * (HEIGHT - 2.0 * MARGIN);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        out,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    );
    let _ = writeln!(
        out,
        r##"<line x1="{0}" y1="{MARGIN}" x2="{0}" y2="{1}" stroke="#999" stroke-dasharray="4 4"/>"##,
        px(0.5),
        HEIGHT - MARGIN
    );
    for (x, anchor) in [(0.0, "start"), (0.5, "middle"), (1.0, "end")] {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="{anchor}">{x}</text>"#,
            px(x),
            HEIGHT - MARGIN + 18.0
        );
    }
    for y in [lo, hi] {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="end">{y:.6}</text>"#,
            MARGIN - 6.0,
            py(y) + 4.0
        );
    }

    for (i, r) in results.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let s = &r.final_state;
        let fields = [
            (s.grid.left_coords(), &s.u),
            (s.grid.right_coords(), &s.v),
        ];
        for (xs, ys) in fields.iter() {
            let points: Vec<String> = thin(xs, ys)
                .into_iter()
                .map(|(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
                .collect();
            let _ = writeln!(
                out,
                r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{}"/>"#,
                points.join(" ")
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" fill="{colour}">{}</text>"#,
            WIDTH - MARGIN + 4.0 - 140.0,
            MARGIN + 16.0 + 14.0 * i as f64,
            r.spec.label
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::thin;

    #[test]
    fn thinning_keeps_endpoints() {
        let xs: Vec<f64> = (0..5001).map(|i| i as f64).collect();
        let pts = thin(&xs, &xs);
        assert!(pts.len() <= 2001);
        assert_eq!(pts[0], (0.0, 0.0));
        assert_eq!(*pts.last().unwrap(), (5000.0, 5000.0));
    }
}
