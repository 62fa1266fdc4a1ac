//! Minimal SVG output: boxplot panels and line charts.

use std::fmt::Write;

use crate::summary::BoxSummary;

const PANEL_W: f64 = 420.0;
const PANEL_H: f64 = 300.0;
const MARGIN_L: f64 = 56.0;
const MARGIN_R: f64 = 16.0;
const MARGIN_T: f64 = 36.0;
const MARGIN_B: f64 = 64.0;
const PALETTE: [&str; 8] = [
    "#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

#[derive(Debug, Clone, Copy)]
struct Axis {
    lo: f64,
    hi: f64,
    from: f64,
    to: f64,
}

impl Axis {
    fn new(lo: f64, hi: f64, from: f64, to: f64) -> Self {
        let (lo, hi) = if hi > lo {
            (lo, hi)
        } else {
            (lo - 0.5, lo + 0.5)
        };
        Self { lo, hi, from, to }
    }

    fn map(&self, v: f64) -> f64 {
        self.from + (v - self.lo) / (self.hi - self.lo) * (self.to - self.from)
    }

    fn ticks(&self) -> Vec<f64> {
        let raw = (self.hi - self.lo) / 5.0;
        let mag = 10f64.powf(raw.log10().floor());
        let step = [1.0, 2.0, 5.0, 10.0]
            .iter()
            .map(|m| m * mag)
            .find(|s| *s >= raw)
            .unwrap_or(10.0 * mag);
        let first = (self.lo / step).ceil() as i64;
        let last = (self.hi / step + 1e-9).floor() as i64;
        (first..=last).map(|k| k as f64 * step).collect()
    }
}

fn fmt_tick(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

struct Frame {
    ox: f64,
    oy: f64,
}

impl Frame {
    fn left(&self) -> f64 {
        self.ox + MARGIN_L
    }
    fn right(&self) -> f64 {
        self.ox + PANEL_W - MARGIN_R
    }
    fn top(&self) -> f64 {
        self.oy + MARGIN_T
    }
    fn bottom(&self) -> f64 {
        self.oy + PANEL_H - MARGIN_B
    }
}

fn header(out: &mut String, width: f64, height: f64, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="16" text-anchor="middle" font-size="13">{}</text>"#,
        width / 2.0,
        escape(title)
    );
}

fn y_axis(out: &mut String, f: &Frame, y: &Axis, label: &str) {
    let _ = writeln!(out, r#"<g class="axis">"#);
    let _ = writeln!(
        out,
        r#"<line x1="{l}" y1="{t}" x2="{l}" y2="{b}" stroke="black"/><line x1="{l}" y1="{b}" x2="{r}" y2="{b}" stroke="black"/>"#,
        l = f.left(),
        t = f.top(),
        b = f.bottom(),
        r = f.right()
    );
    for t in y.ticks() {
        let py = y.map(t);
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{py:.2}" x2="{}" y2="{py:.2}" stroke="black"/><text x="{}" y="{:.2}" text-anchor="end">{}</text>"#,
            f.left() - 4.0,
            f.left(),
            f.left() - 6.0,
            py + 4.0,
            fmt_tick(t)
        );
    }
    let cy = (f.top() + f.bottom()) / 2.0;
    let _ = writeln!(
        out,
        r#"<text x="{x}" y="{cy}" text-anchor="middle" transform="rotate(-90 {x} {cy})">{}</text>"#,
        escape(label),
        x = f.ox + 14.0
    );
    let _ = writeln!(out, "</g>");
}

/// One boxplot per group on a shared axis.
#[derive(Debug, Clone)]
pub struct BoxPanel {
    pub title: String,
    pub y_label: String,
    /// `(name, values)` per box.
    pub groups: Vec<(String, Vec<f64>)>,
}

pub fn boxplot_svg(title: &str, panels: &[BoxPanel]) -> String {
    let width = PANEL_W * panels.len().max(1) as f64;
    let height = PANEL_H + 24.0;
    let mut out = String::new();
    header(&mut out, width, height, title);
    for (p, panel) in panels.iter().enumerate() {
        let f = Frame {
            ox: p as f64 * PANEL_W,
            oy: 24.0,
        };
        let all: Vec<f64> = panel
            .groups
            .iter()
            .flat_map(|(_, v)| v.iter().copied())
            .collect();
        let lo = all.iter().copied().fold(f64::INFINITY, f64::min).min(0.0);
        let hi = all
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
            .max(lo + 1e-3);
        let pad = 0.05 * (hi - lo);
        let y = Axis::new(lo - pad, hi + pad, f.bottom(), f.top());
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            (f.left() + f.right()) / 2.0,
            f.top() - 8.0,
            escape(&panel.title)
        );
        y_axis(&mut out, &f, &y, &panel.y_label);
        let slot = (f.right() - f.left()) / panel.groups.len().max(1) as f64;
        for (g, (name, values)) in panel.groups.iter().enumerate() {
            let color = PALETTE[g % PALETTE.len()];
            let cx = f.left() + slot * (g as f64 + 0.5);
            let half = 0.3 * slot;
            let _ = writeln!(out, r#"<g class="series" data-name="{}">"#, escape(name));
            if let Some(b) = BoxSummary::new(values) {
                let (wl, q1, md, q3, wh) = (
                    y.map(b.whisker_low),
                    y.map(b.q1),
                    y.map(b.median),
                    y.map(b.q3),
                    y.map(b.whisker_high),
                );
                let _ = writeln!(
                    out,
                    r#"<line x1="{cx:.2}" y1="{wl:.2}" x2="{cx:.2}" y2="{q1:.2}" stroke="{color}"/><line x1="{cx:.2}" y1="{q3:.2}" x2="{cx:.2}" y2="{wh:.2}" stroke="{color}"/>"#
                );
                let _ = writeln!(
                    out,
                    r#"<rect x="{:.2}" y="{q3:.2}" width="{:.2}" height="{:.2}" fill="{color}" fill-opacity="0.35" stroke="{color}"/>"#,
                    cx - half,
                    2.0 * half,
                    (q1 - q3).max(0.5)
                );
                let _ = writeln!(
                    out,
                    r#"<line x1="{:.2}" y1="{md:.2}" x2="{:.2}" y2="{md:.2}" stroke="black" stroke-width="2"/>"#,
                    cx - half,
                    cx + half
                );
                for v in b.outliers(values) {
                    let _ = writeln!(
                        out,
                        r#"<circle cx="{cx:.2}" cy="{:.2}" r="2" fill="none" stroke="{color}"/>"#,
                        y.map(v)
                    );
                }
            }
            let _ = writeln!(
                out,
                r#"<text x="{cx:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                f.bottom() + 16.0,
                escape(name)
            );
            let _ = writeln!(out, "</g>");
        }
    }
    out.push_str("</svg>\n");
    out
}

#[derive(Debug, Clone)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
    pub dashed: bool,
}

/// Line chart with a legend; several series may share a name, and are then
/// drawn in the same colour inside one group.
pub fn line_svg(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let width = PANEL_W + 140.0;
    let height = PANEL_H + 24.0;
    let mut out = String::new();
    header(&mut out, width, height, title);
    let f = Frame { ox: 0.0, oy: 24.0 };
    let pts = series.iter().flat_map(|s| s.points.iter());
    let (mut xlo, mut xhi, mut ylo, mut yhi) = (
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    );
    for &(x, y) in pts.filter(|(x, y)| x.is_finite() && y.is_finite()) {
        xlo = xlo.min(x);
        xhi = xhi.max(x);
        ylo = ylo.min(y);
        yhi = yhi.max(y);
    }
    if !xlo.is_finite() {
        (xlo, xhi, ylo, yhi) = (0.0, 1.0, 0.0, 1.0);
    }
    let x = Axis::new(xlo, xhi, f.left(), f.right());
    let y = Axis::new(ylo.min(0.0), yhi, f.bottom(), f.top());
    y_axis(&mut out, &f, &y, y_label);
    let _ = writeln!(out, r#"<g class="axis">"#);
    for t in x.ticks() {
        let px = x.map(t);
        let _ = writeln!(
            out,
            r#"<line x1="{px:.2}" y1="{b}" x2="{px:.2}" y2="{}" stroke="black"/><text x="{px:.2}" y="{}" text-anchor="middle">{}</text>"#,
            f.bottom() + 4.0,
            f.bottom() + 16.0,
            fmt_tick(t),
            b = f.bottom()
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        (f.left() + f.right()) / 2.0,
        f.bottom() + 34.0,
        escape(x_label)
    );
    let _ = writeln!(out, "</g>");

    let mut names: Vec<&str> = Vec::new();
    for s in series {
        if !names.contains(&s.name.as_str()) {
            names.push(&s.name);
        }
    }
    for (i, name) in names.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let _ = writeln!(out, r#"<g class="series" data-name="{}">"#, escape(name));
        for s in series.iter().filter(|s| s.name == *name) {
            let path: Vec<String> = s
                .points
                .iter()
                .filter(|(a, b)| a.is_finite() && b.is_finite())
                .map(|&(a, b)| format!("{:.2},{:.2}", x.map(a), y.map(b)))
                .collect();
            let dash = if s.dashed {
                r#" stroke-dasharray="4 3""#
            } else {
                ""
            };
            let _ = writeln!(
                out,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.2" stroke-opacity="0.8"{dash}/>"#,
                path.join(" ")
            );
        }
        let ly = f.top() + 16.0 * i as f64;
        let _ = writeln!(
            out,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
            PANEL_W + 20.0,
            PANEL_W + 24.0,
            ly + 4.0,
            escape(name),
            lx = PANEL_W
        );
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    out
}
