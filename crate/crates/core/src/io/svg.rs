//! Dependency-free SVG line plots and heatmaps.

use std::fmt::Write as _;
use std::path::Path;

use crate::{Error, Result};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 170.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 60.0;

const PALETTE: [&str; 8] = [
    "#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

/// A labeled `(x, y)` curve.
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self {
            label: label.into(),
            points,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct PlotLabels {
    pub title: String,
    pub x: String,
    pub y: String,
}

impl PlotLabels {
    pub fn new(title: impl Into<String>, x: impl Into<String>, y: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            x: x.into(),
            y: y.into(),
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Tick positions at a 1/2/5 × 10^k spacing inside `[lo, hi]`.
fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = hi - lo;
    let raw = span / 6.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn tick_label(v: f64) -> String {
    let s = format!("{:.3}", v);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".to_owned() } else { s.to_owned() }
}

/// Data extent padded by 5% on each side; a degenerate extent gets ±0.5.
fn padded(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    let span = hi - lo;
    if span > 0.0 {
        (lo - 0.05 * span, hi + 0.05 * span)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        MARGIN_LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN_BOTTOM - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }

    fn axes(&self, out: &mut String, labels: &PlotLabels) {
        let (x0, x1) = (MARGIN_LEFT, WIDTH - MARGIN_RIGHT);
        let (y0, y1) = (HEIGHT - MARGIN_BOTTOM, MARGIN_TOP);
        let _ = writeln!(out, r#"<g class="axes" stroke="black" stroke-width="1">"#);
        let _ = writeln!(out, r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y0:.2}"/>"#);
        let _ = writeln!(out, r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x0:.2}" y2="{y1:.2}"/>"#);
        for t in ticks(self.x.0, self.x.1) {
            let x = self.px(t);
            let _ = writeln!(out, r#"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{:.2}"/>"#, y0 + 5.0);
        }
        for t in ticks(self.y.0, self.y.1) {
            let y = self.py(t);
            let _ = writeln!(out, r#"<line x1="{:.2}" y1="{y:.2}" x2="{x0:.2}" y2="{y:.2}"/>"#, x0 - 5.0);
        }
        let _ = writeln!(out, "</g>");
        let _ = writeln!(out, r#"<g class="tick-labels" font-family="sans-serif" font-size="11">"#);
        for t in ticks(self.x.0, self.x.1) {
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                self.px(t),
                y0 + 18.0,
                tick_label(t)
            );
        }
        for t in ticks(self.y.0, self.y.1) {
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
                x0 - 8.0,
                self.py(t) + 4.0,
                tick_label(t)
            );
        }
        let _ = writeln!(out, "</g>");
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="13" text-anchor="middle">{}</text>"#,
            (x0 + x1) / 2.0,
            HEIGHT - 15.0,
            escape(&labels.x)
        );
        let _ = writeln!(
            out,
            r#"<text x="18" y="{:.2}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 18 {:.2})">{}</text>"#,
            (y0 + y1) / 2.0,
            (y0 + y1) / 2.0,
            escape(&labels.y)
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="24" font-family="sans-serif" font-size="15" text-anchor="middle">{}</text>"#,
            (x0 + x1) / 2.0,
            escape(&labels.title)
        );
    }
}

fn open_svg() -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n<rect class=\"background\" x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    )
}

/// One polyline per series, with axes, tick labels and a legend.
pub fn render_lineplot(labels: &PlotLabels, series: &[Series]) -> Result<String> {
    if series.is_empty() {
        return Err(Error::Empty("series set"));
    }
    for s in series {
        if s.points.is_empty() {
            return Err(Error::domain("series", format!("`{}` has no points", s.label)));
        }
        if s.points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(Error::NonFinite("plot value"));
        }
    }
    let all = || series.iter().flat_map(|s| s.points.iter());
    let frame = Frame {
        x: padded(all().map(|p| p.0)),
        y: padded(all().map(|p| p.1)),
    };

    let mut out = open_svg();
    frame.axes(&mut out, labels);
    for (i, s) in series.iter().enumerate() {
        let pts: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", frame.px(x), frame.py(y)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline class="series" fill="none" stroke="{}" stroke-width="2" points="{}"/>"#,
            PALETTE[i % PALETTE.len()],
            pts.join(" ")
        );
    }
    let lx = WIDTH - MARGIN_RIGHT + 15.0;
    let _ = writeln!(out, r#"<g class="legend" font-family="sans-serif" font-size="12">"#);
    for (i, s) in series.iter().enumerate() {
        let y = MARGIN_TOP + 10.0 + 20.0 * i as f64;
        let _ = writeln!(
            out,
            r#"<line x1="{lx:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{}" stroke-width="2"/>"#,
            lx + 20.0,
            PALETTE[i % PALETTE.len()]
        );
        let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, lx + 26.0, y + 4.0, escape(&s.label));
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}

pub fn emit_svg_lineplot(labels: &PlotLabels, series: &[Series], path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, render_lineplot(labels, series)?)?;
    Ok(())
}

/// Intensities on a rectangular grid: `cells[row][col]` sits at
/// `(x_values[col], y_values[row])`.
#[derive(Clone, Debug, PartialEq)]
pub struct Heatmap {
    pub labels: PlotLabels,
    pub x_values: Vec<f64>,
    pub y_values: Vec<f64>,
    pub cells: Vec<Vec<f64>>,
}

fn gray(v: f64) -> String {
    let g = (v.clamp(0.0, 1.0) * 255.0).round() as u8;
    format!("rgb({g},{g},{g})")
}

/// One grayscale rectangle per cell (0 black, 1 white) plus a color bar.
pub fn render_heatmap(map: &Heatmap) -> Result<String> {
    let rows = map.cells.len();
    if rows == 0 {
        return Err(Error::Empty("heatmap grid"));
    }
    let cols = map.cells[0].len();
    if cols == 0 {
        return Err(Error::Empty("heatmap row"));
    }
    for (row, cells) in map.cells.iter().enumerate() {
        if cells.len() != cols {
            return Err(Error::RaggedGrid {
                row,
                len: cells.len(),
                expected: cols,
            });
        }
        if let Some(&v) = cells.iter().find(|v| !(-1e-9..=1.0 + 1e-9).contains(*v)) {
            return Err(Error::Probability {
                field: "heatmap cell".into(),
                value: v,
            });
        }
    }
    if map.x_values.len() != cols || map.y_values.len() != rows {
        return Err(Error::domain("heatmap axes", "axis lengths must match the grid"));
    }

    let span = |v: &[f64]| {
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if hi > lo { (lo, hi) } else { (lo - 0.5, hi + 0.5) }
    };
    let frame = Frame {
        x: span(&map.x_values),
        y: span(&map.y_values),
    };
    let (x0, x1) = (MARGIN_LEFT, WIDTH - MARGIN_RIGHT);
    let (y0, y1) = (HEIGHT - MARGIN_BOTTOM, MARGIN_TOP);
    let cw = (x1 - x0) / cols as f64;
    let ch = (y0 - y1) / rows as f64;

    let mut out = open_svg();
    let _ = writeln!(out, r#"<g class="cells" shape-rendering="crispEdges">"#);
    for (r, cells) in map.cells.iter().enumerate() {
        for (c, &v) in cells.iter().enumerate() {
            let _ = writeln!(
                out,
                r#"<rect class="cell" x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}"><title>{}</title></rect>"#,
                x0 + c as f64 * cw,
                y0 - (r + 1) as f64 * ch,
                cw,
                ch,
                gray(v),
                crate::io::format_value(v)
            );
        }
    }
    out.push_str("</g>\n");
    // axis ticks are placed against the cell centers' value range
    let centered = Frame {
        x: (
            frame.x.0 - (frame.x.1 - frame.x.0) / (2.0 * (cols.max(2) - 1) as f64),
            frame.x.1 + (frame.x.1 - frame.x.0) / (2.0 * (cols.max(2) - 1) as f64),
        ),
        y: (
            frame.y.0 - (frame.y.1 - frame.y.0) / (2.0 * (rows.max(2) - 1) as f64),
            frame.y.1 + (frame.y.1 - frame.y.0) / (2.0 * (rows.max(2) - 1) as f64),
        ),
    };
    centered.axes(&mut out, &map.labels);

    let bx = x1 + 30.0;
    let _ = writeln!(
        out,
        r#"<defs><linearGradient id="colorbar" x1="0" y1="1" x2="0" y2="0"><stop offset="0" stop-color="black"/><stop offset="1" stop-color="white"/></linearGradient></defs>"#
    );
    let _ = writeln!(
        out,
        r#"<rect class="colorbar" x="{bx:.2}" y="{y1:.2}" width="20" height="{:.2}" fill="url(#colorbar)" stroke="black"/>"#,
        y0 - y1
    );
    let _ = writeln!(
        out,
        r#"<g font-family="sans-serif" font-size="11"><text x="{:.2}" y="{:.2}">1</text><text x="{:.2}" y="{:.2}">0</text></g>"#,
        bx + 26.0,
        y1 + 8.0,
        bx + 26.0,
        y0
    );
    out.push_str("</svg>\n");
    Ok(out)
}

pub fn emit_svg_heatmap(map: &Heatmap, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, render_heatmap(map)?)?;
    Ok(())
}
