//! Standalone SVG line plots: one or more stacked panels sharing a width.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{CliError, Result};

const WIDTH: f64 = 800.0;
const PANEL_HEIGHT: f64 = 260.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 50.0;
const COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

impl Series {
    pub fn new(name: impl Into<String>, xs: Vec<f64>, ys: Vec<f64>) -> Self {
        Self {
            name: name.into(),
            xs,
            ys,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Panel {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    /// Draw a dot at every point, for sparse sweep data.
    pub markers: bool,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Round step of roughly `span / target` from the 1-2-5 family.
fn nice_step(span: f64, target: usize) -> f64 {
    let raw = span / target as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let f = raw / mag;
    let nice = if f <= 1.0 {
        1.0
    } else if f <= 2.0 {
        2.0
    } else if f <= 5.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let step = nice_step(hi - lo, 5);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

fn tick_label(v: f64, step: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if !(1e-3..1e5).contains(&a) {
        return format!("{v:.2e}");
    }
    let decimals = (-step.log10().floor()).max(0.0) as usize;
    format!("{v:.decimals$}")
}

fn range(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
    if lo > hi {
        return None;
    }
    if lo == hi {
        let eps = if lo == 0.0 { 1.0 } else { 0.05 * lo.abs() };
        return Some((lo - eps, hi + eps));
    }
    Some((lo, hi))
}

/// Keep the first/last point plus the min and max of each pixel column.
fn decimate(xs: &[f64], ys: &[f64], x0: f64, x1: f64, columns: usize) -> Vec<(f64, f64)> {
    if xs.len() <= 4 * columns {
        return xs.iter().copied().zip(ys.iter().copied()).collect();
    }
    let mut out = Vec::with_capacity(2 * columns + 2);
    let bucket = |x: f64| (((x - x0) / (x1 - x0)) * columns as f64).floor() as i64;
    let mut i = 0;
    while i < xs.len() {
        let b = bucket(xs[i]);
        let start = i;
        let (mut lo, mut hi) = (i, i);
        while i < xs.len() && bucket(xs[i]) == b {
            if ys[i] < ys[lo] {
                lo = i;
            }
            if ys[i] > ys[hi] {
                hi = i;
            }
            i += 1;
        }
        let mut picks = vec![start, lo, hi, i - 1];
        picks.sort_unstable();
        picks.dedup();
        out.extend(picks.into_iter().map(|k| (xs[k], ys[k])));
    }
    out
}

fn render_panel(out: &mut String, panel: &Panel, top: f64) -> Result<()> {
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = PANEL_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let (x0, x1) = range(panel.series.iter().flat_map(|s| s.xs.iter().copied()))
        .ok_or_else(|| CliError::Usage(format!("panel '{}' has no finite x data", panel.title)))?;
    let (y0, y1) = range(panel.series.iter().flat_map(|s| s.ys.iter().copied()))
        .ok_or_else(|| CliError::Usage(format!("panel '{}' has no finite y data", panel.title)))?;
    let left = MARGIN_LEFT;
    let plot_top = top + MARGIN_TOP;
    let bottom = plot_top + plot_h;
    let sx = |x: f64| left + (x - x0) / (x1 - x0) * plot_w;
    let sy = |y: f64| bottom - (y - y0) / (y1 - y0) * plot_h;

    let _ = writeln!(
        out,
        r##"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="14">{}</text>"##,
        left + plot_w / 2.0,
        top + 18.0,
        escape(&panel.title)
    );
    let _ = writeln!(
        out,
        r##"<rect x="{left:.2}" y="{plot_top:.2}" width="{plot_w:.2}" height="{plot_h:.2}" fill="none" stroke="#000"/>"##
    );
    let xstep = nice_step(x1 - x0, 5);
    for t in ticks(x0, x1) {
        let x = sx(t);
        let _ = writeln!(
            out,
            r##"<line x1="{x:.2}" y1="{bottom:.2}" x2="{x:.2}" y2="{:.2}" stroke="#000"/><text x="{x:.2}" y="{:.2}" text-anchor="middle" font-size="11">{}</text>"##,
            bottom + 5.0,
            bottom + 18.0,
            tick_label(t, xstep)
        );
    }
    let ystep = nice_step(y1 - y0, 5);
    for t in ticks(y0, y1) {
        let y = sy(t);
        let _ = writeln!(
            out,
            r##"<line x1="{:.2}" y1="{y:.2}" x2="{left:.2}" y2="{y:.2}" stroke="#000"/><text x="{:.2}" y="{:.2}" text-anchor="end" font-size="11">{}</text>"##,
            left - 5.0,
            left - 8.0,
            y + 4.0,
            tick_label(t, ystep)
        );
    }
    let _ = writeln!(
        out,
        r##"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="12">{}</text>"##,
        left + plot_w / 2.0,
        bottom + 38.0,
        escape(&panel.x_label)
    );
    let _ = writeln!(
        out,
        r##"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="12" transform="rotate(-90 {:.2} {:.2})">{}</text>"##,
        left - 60.0,
        plot_top + plot_h / 2.0,
        left - 60.0,
        plot_top + plot_h / 2.0,
        escape(&panel.y_label)
    );

    for (i, s) in panel.series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts = decimate(&s.xs, &s.ys, x0, x1, plot_w as usize);
        let mut path = String::new();
        for (k, (x, y)) in pts
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .enumerate()
        {
            if k > 0 {
                path.push(' ');
            }
            let _ = write!(path, "{:.2},{:.2}", sx(*x), sy(*y));
        }
        let _ = writeln!(
            out,
            r##"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{path}"/>"##
        );
        if panel.markers {
            for (x, y) in &pts {
                let _ = writeln!(
                    out,
                    r##"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"##,
                    sx(*x),
                    sy(*y)
                );
            }
        }
        let ly = plot_top + 14.0 + 16.0 * i as f64;
        let lx = left + plot_w - 150.0;
        let _ = writeln!(
            out,
            r##"<line x1="{lx:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-width="3"/><text x="{:.2}" y="{ly:.2}" font-size="11">{}</text>"##,
            ly - 4.0,
            lx + 20.0,
            ly - 4.0,
            lx + 25.0,
            escape(&s.name)
        );
    }
    Ok(())
}

/// Render panels stacked top to bottom.
pub fn render_svg(panels: &[Panel]) -> Result<String> {
    if panels.is_empty() || panels.iter().any(|p| p.series.is_empty()) {
        return Err(CliError::Usage("nothing to plot: empty series set".into()));
    }
    for s in panels.iter().flat_map(|p| &p.series) {
        if s.xs.len() != s.ys.len() || s.xs.is_empty() {
            return Err(CliError::Usage(format!(
                "series '{}' is empty or ragged",
                s.name
            )));
        }
    }
    let height = PANEL_HEIGHT * panels.len() as f64;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}" font-family="sans-serif">"##
    );
    let _ = writeln!(out, r##"<rect width="100%" height="100%" fill="#fff"/>"##);
    for (i, p) in panels.iter().enumerate() {
        let _ = writeln!(out, r##"<g class="panel">"##);
        render_panel(&mut out, p, i as f64 * PANEL_HEIGHT)?;
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Render and write. Nothing is written when rendering fails.
pub fn write_plot_svg(panels: &[Panel], path: &Path) -> Result<()> {
    let svg = render_svg(panels)?;
    std::fs::write(path, svg).map_err(|e| CliError::io(path, e))
}
