//! Three-sphere inequality on 2D harmonic polynomials: quadrature against
//! the closed-form disk integrals, then the fitted-constant spread across
//! degrees (log-convexity exactness).

use super::util;
use crate::{Outcome, RunContext};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;
use uclab::continuation::{
    disk_integral_sq, harmonic_poly_disk_integral, three_sphere_fit, EllipticField2d, SphereTriple,
};
use uclab::{Result, UclabError};

#[derive(Debug, Serialize, Deserialize)]
pub struct Params {
    pub degrees: Vec<usize>,
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    pub lambda_tilde: f64,
    pub n_quad: usize,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            degrees: (1..=6).collect(),
            r1: 0.0082,
            r2: 0.225,
            r3: 0.45,
            lambda_tilde: 1.0,
            n_quad: 360,
        }
    }
}

pub fn default_params() -> serde_json::Value {
    serde_json::to_value(Params::default()).unwrap()
}

fn harmonic(k: usize) -> impl Fn(f64, f64) -> f64 {
    move |x: f64, y: f64| {
        let (mut re, mut im) = (1.0f64, 0.0f64);
        for _ in 0..k {
            let (nr, ni) = (re * x - im * y, re * y + im * x);
            re = nr;
            im = ni;
        }
        re
    }
}

pub fn run(ctx: &RunContext, params: &serde_json::Value) -> Result<Outcome> {
    let p: Params = serde_json::from_value(params.clone())
        .map_err(|e| UclabError::invalid(format!("three-sphere params: {e}")))?;
    let triple = SphereTriple { r1: p.r1, r2: p.r2, r3: p.r3 };
    triple.validate(p.lambda_tilde, ctx.calibration.gamma1)?;
    let mut outcome = Outcome::default();

    // oracle equivalence: quadrature matches the closed form where the grid
    // resolves the ball (the middle and outer radii)
    let mut worst_quad = 0.0f64;
    for &k in p.degrees.iter().take(3) {
        let f = EllipticField2d::analytic(harmonic(k));
        for &r in &[p.r2, p.r3] {
            let got = disk_integral_sq(&f, (0.0, 0.0), r, p.n_quad);
            let want = harmonic_poly_disk_integral(k, r);
            worst_quad = worst_quad.max((got - want).abs() / want);
        }
    }
    outcome.push(
        "quadrature-oracle-equivalence",
        worst_quad < 1e-2,
        format!("max relative quadrature error {worst_quad:.3e}"),
    );

    // fitted constants per degree from the exact log-convexity reference
    let mut rows = Vec::new();
    let mut fitted = Vec::new();
    for &k in &p.degrees {
        let i1 = harmonic_poly_disk_integral(k, p.r1);
        let i2 = harmonic_poly_disk_integral(k, p.r2);
        let i3 = harmonic_poly_disk_integral(k, p.r3);
        let check = three_sphere_fit(i1, i2, i3, &triple, p.lambda_tilde)?;
        rows.push(vec![k as f64, check.fitted_c, check.theta0, i1, i2, i3]);
        fitted.push(check.fitted_c);
    }
    let lo = fitted.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = fitted.iter().cloned().fold(0.0f64, f64::max);
    let spread = hi / lo - 1.0;
    outcome.push(
        "fitted-constant-spread",
        spread < ctx.tolerances.three_sphere_spread,
        format!("C in [{lo:.4}, {hi:.4}], spread {:.1}%", spread * 100.0),
    );

    util::write_csv_file(
        &ctx.path("three_sphere.csv"),
        &["degree", "fitted_c", "theta0", "i1", "i2", "i3"],
        &rows,
    )?;
    outcome.files.push(PathBuf::from("three_sphere.csv"));
    Ok(outcome)
}
