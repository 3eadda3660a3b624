//! Shared helpers for the experiment drivers.

use uclab::output;
use uclab::Result;

pub fn write_csv_file(path: &std::path::Path, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    output::write_csv(&mut f, header, rows)
}

pub fn write_svg_file(
    path: &std::path::Path,
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[output::Series],
) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    output::write_loglog_svg(&mut f, title, x_label, y_label, series)
}

/// Smooth compactly supported profile used as initial data in oracles.
pub fn bump(x: f64) -> f64 {
    if x.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - x * x)).exp()
    }
}
