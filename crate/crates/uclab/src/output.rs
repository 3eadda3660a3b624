//! CSV and SVG emission helpers shared by the experiment drivers.
//!
//! Floats are written with Rust's shortest-roundtrip formatting, which is
//! deterministic, so re-running with the same inputs reproduces byte-identical
//! files.

use crate::Result;
use std::io::Write;

/// Writes a CSV with the given header and rows.
pub fn write_csv<W: Write>(w: &mut W, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    writeln!(w, "{}", header.join(","))?;
    for row in rows {
        let line: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}

/// A named series for plotting.
pub struct Series<'a> {
    pub label: &'a str,
    pub points: Vec<(f64, f64)>,
}

/// Minimal log-log SVG plot: axes, decade gridlines, one polyline per series.
pub fn write_loglog_svg<W: Write>(
    w: &mut W,
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[Series],
) -> Result<()> {
    let (width, height, margin) = (640.0, 480.0, 60.0);
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for s in series {
        for &(x, y) in &s.points {
            if x > 0.0 && y > 0.0 {
                pts.push((x.log10(), y.log10()));
            }
        }
    }
    if pts.is_empty() {
        writeln!(w, "<svg xmlns=\"http://www.w3.org/2000/svg\"/>")?;
        return Ok(());
    }
    let (mut x0, mut x1) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if x1 - x0 < 1e-12 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 < 1e-12 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| margin + (x - x0) / (x1 - x0) * (width - 2.0 * margin);
    let sy = |y: f64| height - margin - (y - y0) / (y1 - y0) * (height - 2.0 * margin);

    writeln!(
        w,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    )?;
    writeln!(w, "<rect width=\"{width}\" height=\"{height}\" fill=\"white\"/>")?;
    writeln!(
        w,
        "<text x=\"{}\" y=\"24\" font-size=\"15\" text-anchor=\"middle\">{}</text>",
        width / 2.0,
        title
    )?;
    // decade gridlines
    for d in (x0.floor() as i64)..=(x1.ceil() as i64) {
        let x = sx(d as f64);
        if x >= margin - 1.0 && x <= width - margin + 1.0 {
            writeln!(
                w,
                "<line x1=\"{x}\" y1=\"{margin}\" x2=\"{x}\" y2=\"{}\" stroke=\"#ddd\"/>",
                height - margin
            )?;
            writeln!(
                w,
                "<text x=\"{x}\" y=\"{}\" font-size=\"11\" text-anchor=\"middle\">1e{d}</text>",
                height - margin + 16.0
            )?;
        }
    }
    for d in (y0.floor() as i64)..=(y1.ceil() as i64) {
        let y = sy(d as f64);
        if y >= margin - 1.0 && y <= height - margin + 1.0 {
            writeln!(
                w,
                "<line x1=\"{margin}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" stroke=\"#ddd\"/>",
                width - margin
            )?;
            writeln!(
                w,
                "<text x=\"{}\" y=\"{y}\" font-size=\"11\" text-anchor=\"end\">1e{d}</text>",
                margin - 6.0
            )?;
        }
    }
    writeln!(
        w,
        "<rect x=\"{margin}\" y=\"{margin}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>",
        width - 2.0 * margin,
        height - 2.0 * margin
    )?;
    writeln!(
        w,
        "<text x=\"{}\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\">{}</text>",
        width / 2.0,
        height - 12.0,
        x_label
    )?;
    writeln!(
        w,
        "<text x=\"16\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">{}</text>",
        height / 2.0,
        height / 2.0,
        y_label
    )?;

    let palette = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
    for (idx, s) in series.iter().enumerate() {
        let color = palette[idx % palette.len()];
        let path: Vec<String> = s
            .points
            .iter()
            .filter(|(x, y)| *x > 0.0 && *y > 0.0)
            .map(|(x, y)| format!("{},{}", sx(x.log10()), sy(y.log10())))
            .collect();
        if path.is_empty() {
            continue;
        }
        writeln!(
            w,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>",
            path.join(" ")
        )?;
        writeln!(
            w,
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"{color}\">{}</text>",
            width - margin - 140.0,
            margin + 18.0 * (idx as f64 + 1.0),
            s.label
        )?;
    }
    writeln!(w, "</svg>")?;
    Ok(())
}
