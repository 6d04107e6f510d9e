//! Static log-log SVG plots of convergence reports.

use std::fmt::Write as _;

use crate::harness::{ConvergenceReport, SweepMode};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: (f64, f64, f64, f64) = (70.0, 20.0, 30.0, 50.0); // left, right, top, bottom

struct Axes {
    x: (f64, f64),
    y: (f64, f64),
}

impl Axes {
    fn px(&self, v: f64) -> f64 {
        let (lo, hi) = self.x;
        MARGIN.0 + (v.log10() - lo) / (hi - lo) * (WIDTH - MARGIN.0 - MARGIN.1)
    }

    fn py(&self, v: f64) -> f64 {
        let (lo, hi) = self.y;
        HEIGHT - MARGIN.3 - (v.log10() - lo) / (hi - lo) * (HEIGHT - MARGIN.2 - MARGIN.3)
    }
}

fn decade_range(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    let logs: Vec<f64> = values.filter(|v| *v > 0.0 && v.is_finite()).map(f64::log10).collect();
    let lo = logs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if logs.is_empty() {
        return None;
    }
    let (lo, hi) = (lo.floor(), hi.ceil());
    Some(if lo == hi { (lo - 1.0, hi + 1.0) } else { (lo, hi) })
}

fn polyline(out: &mut String, axes: &Axes, xs: &[f64], ys: &[f64], style: &str) {
    let points: Vec<String> = xs
        .iter()
        .zip(ys)
        .filter(|(_, y)| **y > 0.0)
        .map(|(x, y)| format!("{:.2},{:.2}", axes.px(*x), axes.py(*y)))
        .collect();
    if points.len() >= 2 {
        writeln!(out, r#"<polyline fill="none" {style} points="{}"/>"#, points.join(" ")).unwrap();
    }
    for p in &points {
        let (cx, cy) = p.split_once(',').unwrap();
        writeln!(out, r#"<circle cx="{cx}" cy="{cy}" r="2.5" {style}/>"#).unwrap();
    }
}

/// Norm (and sup-norm) against the parameter on log-log axes, with a dashed
/// reference line of slope `1/p` through the last positive point.
pub fn render_svg(report: &ConvergenceReport) -> String {
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    let sup = report.sup_norms.as_deref().unwrap_or(&[]);
    let ranges = (
        decade_range(report.params.iter().copied()),
        decade_range(report.norms.iter().chain(sup).copied()),
    );
    let (label, series) = match report.mode {
        SweepMode::Smoothing => ("eps", "N(eps)"),
        SweepMode::Shift => ("s", "M(s)"),
    };
    let (Some(x), Some(y)) = ranges else {
        writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">all norms vanish</text>"#, WIDTH / 2.0, HEIGHT / 2.0).unwrap();
        out.push_str("</svg>\n");
        return out;
    };
    let axes = Axes { x, y };

    let (left, right, top, bottom) = (MARGIN.0, WIDTH - MARGIN.1, MARGIN.2, HEIGHT - MARGIN.3);
    writeln!(
        out,
        r#"<rect x="{left}" y="{top}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        right - left,
        bottom - top
    )
    .unwrap();
    for d in (x.0 as i32)..=(x.1 as i32) {
        let px = axes.px(10f64.powi(d));
        writeln!(out, r##"<line x1="{px:.2}" y1="{top}" x2="{px:.2}" y2="{bottom}" stroke="#ddd"/>"##).unwrap();
        writeln!(out, r#"<text x="{px:.2}" y="{}" text-anchor="middle">1e{d}</text>"#, bottom + 16.0).unwrap();
    }
    for d in (y.0 as i32)..=(y.1 as i32) {
        let py = axes.py(10f64.powi(d));
        writeln!(out, r##"<line x1="{left}" y1="{py:.2}" x2="{right}" y2="{py:.2}" stroke="#ddd"/>"##).unwrap();
        writeln!(out, r#"<text x="{}" y="{:.2}" text-anchor="end">1e{d}</text>"#, left - 6.0, py + 4.0).unwrap();
    }
    writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">{label}</text>"#, (left + right) / 2.0, HEIGHT - 12.0).unwrap();

    polyline(&mut out, &axes, &report.params, &report.norms, r##"stroke="#1f77b4" fill="#1f77b4""##);
    if !sup.is_empty() {
        polyline(&mut out, &axes, &report.params, sup, r##"stroke="#ff7f0e" fill="#ff7f0e""##);
    }
    if let Some(i) = report.norms.iter().rposition(|v| *v > 0.0) {
        let (e1, n1) = (report.params[i], report.norms[i]);
        let e0 = report.params[0];
        let n0 = n1 * (e0 / e1).powf(1.0 / report.p);
        writeln!(
            out,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="gray" stroke-dasharray="5,4"/>"#,
            axes.px(e0),
            axes.py(n0),
            axes.px(e1),
            axes.py(n1)
        )
        .unwrap();
    }
    let rate = report.rate.map(|r| format!("{r:.4}")).unwrap_or_else(|| "n/a".into());
    writeln!(
        out,
        r#"<text x="{}" y="{}">{series}, p = {}, fitted slope {rate}, reference 1/p dashed</text>"#,
        left + 8.0,
        top - 10.0,
        report.p
    )
    .unwrap();
    out.push_str("</svg>\n");
    out
}
