//! Standalone SVG scatter plots.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{ensure, Context, Result};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 540.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 44.0;
const MARGIN_BOTTOM: f64 = 60.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Axes {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
}

impl Axes {
    pub fn new(title: impl Into<String>, x_label: impl Into<String>, y_label: impl Into<String>) -> Self {
        Self { title: title.into(), x_label: x_label.into(), y_label: y_label.into() }
    }
}

const COLORS: [&str; 4] = ["#1f4e9c", "#c43c24", "#2a8a3a", "#7b3fa0"];

/// A named set of points drawn in one colour.
#[derive(Debug, Clone, PartialEq)]
pub struct Series<'a> {
    pub name: &'a str,
    pub points: &'a [(f64, f64)],
}

/// Data range, widened by 5% of its magnitude (or by 0.5 around zero) when
/// degenerate.
fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if hi > lo {
        (lo, hi)
    } else {
        let pad = if lo == 0.0 { 0.5 } else { 0.05 * lo.abs() };
        (lo - pad, hi + pad)
    }
}

/// Round tick positions covering `[lo, hi]` with about `target` intervals.
pub fn nice_ticks(lo: f64, hi: f64, target: usize) -> Vec<f64> {
    let raw = (hi - lo) / target.max(1) as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 2.5, 5.0, 10.0].iter().map(|m| m * mag).find(|&s| s >= raw).unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn label(v: f64) -> String {
    let s = format!("{:.6}", v);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Renders `points` as a scatter plot with linear axes.
pub fn scatter(points: &[(f64, f64)], axes: &Axes) -> Result<String> {
    scatter_series(&[Series { name: "", points }], axes)
}

/// Scatter plot of several series; a legend is drawn when any series is named.
pub fn scatter_series(series: &[Series<'_>], axes: &Axes) -> Result<String> {
    let all = || series.iter().flat_map(|s| s.points.iter());
    ensure!(all().next().is_some(), "nothing to plot");
    ensure!(all().all(|(x, y)| x.is_finite() && y.is_finite()), "non-finite point in plot data");
    let (x0, x1) = range(all().map(|p| p.0));
    let (y0, y1) = range(all().map(|p| p.1));
    let pw = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let ph = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = |x: f64| MARGIN_LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| MARGIN_TOP + (1.0 - (y - y0) / (y1 - y0)) * ph;

    let mut s = String::new();
    writeln!(
        s,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">
<rect width="100%" height="100%" fill="white"/>
<text x="{}" y="26" text-anchor="middle" font-size="16">{}</text>
<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#,
        WIDTH / 2.0,
        escape(&axes.title)
    )?;
    for t in nice_ticks(x0, x1, 6) {
        let x = sx(t);
        let yb = MARGIN_TOP + ph;
        writeln!(s, r#"<line x1="{x:.2}" y1="{yb}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#, yb + 5.0)?;
        writeln!(s, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, yb + 19.0, label(t))?;
    }
    for t in nice_ticks(y0, y1, 6) {
        let y = sy(t);
        writeln!(
            s,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{MARGIN_LEFT}" y2="{y:.2}" stroke="black"/>"#,
            MARGIN_LEFT - 5.0
        )?;
        writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#, MARGIN_LEFT - 8.0, y + 4.0, label(t))?;
    }
    writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        MARGIN_LEFT + pw / 2.0,
        HEIGHT - 16.0,
        escape(&axes.x_label)
    )?;
    writeln!(
        s,
        r#"<text transform="translate(20 {:.2}) rotate(-90)" text-anchor="middle">{}</text>"#,
        MARGIN_TOP + ph / 2.0,
        escape(&axes.y_label)
    )?;
    for (i, ser) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        writeln!(s, r#"<g fill="{color}">"#)?;
        for &(x, y) in ser.points {
            writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="1.2"/>"#, sx(x), sy(y))?;
        }
        s.push_str("</g>\n");
        if !ser.name.is_empty() {
            let ly = MARGIN_TOP + 16.0 + 16.0 * i as f64;
            let lx = MARGIN_LEFT + pw - 150.0;
            writeln!(s, r#"<circle cx="{lx:.2}" cy="{:.2}" r="4" fill="{color}"/>"#, ly - 4.0)?;
            writeln!(s, r#"<text x="{:.2}" y="{ly:.2}">{}</text>"#, lx + 10.0, escape(ser.name))?;
        }
    }
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn write_scatter(points: &[(f64, f64)], axes: &Axes, path: &Path) -> Result<()> {
    write_series(&[Series { name: "", points }], axes, path)
}

pub fn write_series(series: &[Series<'_>], axes: &Axes, path: &Path) -> Result<()> {
    let svg = scatter_series(series, axes)?;
    fs::write(path, svg).with_context(|| format!("cannot write {}", path.display()))
}
