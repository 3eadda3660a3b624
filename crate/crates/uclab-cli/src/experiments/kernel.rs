//! Heat-kernel contract checks.

use super::util;
use crate::{Outcome, RunContext};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;
use uclab::pde::heat_kernel;
use uclab::{Result, UclabError};

#[derive(Debug, Serialize, Deserialize)]
pub struct Params {
    /// evaluation point for the delta-family limit
    pub y: f64,
    /// times of the convergence ladder, descending
    pub s_ladder: Vec<f64>,
    /// quadrature nodes per unit length
    pub n_quad: usize,
}

impl Default for Params {
    fn default() -> Self {
        Params { y: 0.2, s_ladder: vec![1e-2, 1e-3, 1e-4], n_quad: 20000 }
    }
}

pub fn default_params() -> serde_json::Value {
    serde_json::to_value(Params::default()).unwrap()
}

pub fn run(ctx: &RunContext, params: &serde_json::Value) -> Result<Outcome> {
    let p: Params = serde_json::from_value(params.clone())
        .map_err(|e| UclabError::invalid(format!("kernel-checks params: {e}")))?;
    if p.s_ladder.len() < 2 || p.s_ladder.windows(2).any(|w| w[0] <= w[1]) {
        return Err(UclabError::invalid("kernel-checks: s_ladder must be descending"));
    }
    let mut outcome = Outcome::default();

    // delta family: int Gamma(x, s; y, 0) u0(x) dx -> u0(y) monotonically
    let u0 = |x: f64| util::bump(x / 0.8);
    let target = u0(p.y);
    let mut rows = Vec::new();
    let mut errors = Vec::new();
    for &s in &p.s_ladder {
        let half_width = 8.0 * (4.0 * s).sqrt() + 0.9;
        let n = p.n_quad;
        let h = 2.0 * half_width / n as f64;
        let mut acc = 0.0;
        for i in 0..n {
            let x = p.y - half_width + (i as f64 + 0.5) * h;
            acc += heat_kernel(&[x], s, &[p.y], 0.0, 1) * u0(x) * h;
        }
        let err = (acc - target).abs();
        rows.push(vec![s, acc, err]);
        errors.push(err);
    }
    let monotone = errors.windows(2).all(|w| w[1] < w[0]);
    outcome.push(
        "delta-family-monotone",
        monotone,
        format!("errors {errors:?} decreasing toward u0(y) = {target}"),
    );

    // backward vanishing is exact, including s = tau
    let zero_ok = heat_kernel(&[0.3], 0.5, &[0.0], 1.0, 1) == 0.0
        && heat_kernel(&[0.3], 1.0, &[0.0], 1.0, 1) == 0.0
        && heat_kernel(&[0.1, 0.4], 0.2, &[0.0, 0.0], 0.3, 2) == 0.0;
    outcome.push("backward-vanishing-exact", zero_ok, "Gamma = 0 for s <= tau");

    let norm = heat_kernel(&[0.0], 1.0 / (4.0 * std::f64::consts::PI), &[0.0], 0.0, 1);
    outcome.push(
        "normalization",
        (norm - 1.0).abs() < 1e-14,
        format!("kernel at s - tau = 1/(4 pi): {norm}"),
    );

    util::write_csv_file(&ctx.path("kernel_delta_family.csv"), &["s", "integral", "error"], &rows)?;
    outcome.files.push(PathBuf::from("kernel_delta_family.csv"));
    Ok(outcome)
}
