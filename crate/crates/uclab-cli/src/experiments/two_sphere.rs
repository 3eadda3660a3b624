//! Two-sphere one-cylinder inequality on caloric test fields, with the
//! boundary variant via odd reflection.

use super::util;
use crate::{Outcome, RunContext};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;
use uclab::continuation::{odd_reflection_1d, two_sphere_one_cylinder_check};
use uclab::pde::{heat_kernel, Grid, HeatField, Provenance};
use uclab::{Result, UclabError};

#[derive(Debug, Serialize, Deserialize)]
pub struct Params {
    /// smallest radius of the decade sweep
    pub r_lo: f64,
    pub rho: f64,
    pub big_r: f64,
    pub r_points: usize,
    pub nx: usize,
    pub nt: usize,
}

impl Default for Params {
    fn default() -> Self {
        Params { r_lo: 0.01, rho: 0.12, big_r: 0.6, r_points: 5, nx: 256, nt: 192 }
    }
}

pub fn default_params() -> serde_json::Value {
    serde_json::to_value(Params::default()).unwrap()
}

fn caloric_fields(nx: usize, nt: usize) -> Result<Vec<(String, HeatField)>> {
    let grid1 = Grid::new_1d(-1.0, 1.0, nx, 0.0, 1.0, nt)?;
    let mut fields: Vec<(String, HeatField)> = Vec::new();
    for (label, pole_x, pole_t) in [
        ("kernel-centered", 0.0, -0.5),
        ("kernel-offset", 0.3, -0.8),
        ("kernel-late", -0.2, -0.25),
    ] {
        let f = HeatField::from_fn_1d(grid1.clone(), Provenance::Analytic, move |x, t| {
            heat_kernel(&[x], t, &[pole_x], pole_t, 1)
        })?;
        fields.push((label.to_string(), f));
    }
    // heat polynomial x^2 + 2t, shifted positive in time
    let f = HeatField::from_fn_1d(grid1.clone(), Provenance::Analytic, |x, t| {
        x * x + 2.0 * t + 0.4
    })?;
    fields.push(("heat-polynomial".to_string(), f));
    // 2D translated kernel
    let grid2 = Grid::new_2d(-1.0, 1.0, nx / 3, -1.0, 1.0, nx / 3, 0.0, 1.0, nt / 2)?;
    let f2 = HeatField::from_fn_2d(grid2, Provenance::Analytic, |x, y, t| {
        heat_kernel(&[x, y], t, &[0.25, -0.1], -0.6, 2)
    })?;
    fields.push(("kernel-2d".to_string(), f2));
    Ok(fields)
}

pub fn run(ctx: &RunContext, params: &serde_json::Value) -> Result<Outcome> {
    let p: Params = serde_json::from_value(params.clone())
        .map_err(|e| UclabError::invalid(format!("two-sphere params: {e}")))?;
    if p.r_points < 2 {
        return Err(UclabError::invalid("two-sphere: need at least 2 sweep points"));
    }
    let mut outcome = Outcome::default();
    let eta1 = ctx.calibration.eta1;
    let mut rows = Vec::new();

    for (idx, (label, field)) in caloric_fields(p.nx, p.nt)?.iter().enumerate() {
        let mut cs = Vec::new();
        for step in 0..p.r_points {
            // r sweeps one decade upward from r_lo
            let r = p.r_lo * 10f64.powf(step as f64 / (p.r_points - 1) as f64);
            let check = two_sphere_one_cylinder_check(
                field,
                &vec![0.0; field.grid.dim()],
                1.0,
                r,
                p.rho,
                p.big_r,
                eta1,
                1.0,
            )?;
            rows.push(vec![idx as f64, r, check.fitted_c, check.theta1]);
            cs.push(check.fitted_c);
        }
        let lo = cs.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = cs.iter().cloned().fold(0.0f64, f64::max);
        outcome.push(
            format!("interior-{label}"),
            hi / lo <= ctx.tolerances.two_sphere_stability_factor,
            format!("fitted C in [{lo:.3}, {hi:.3}] over the r decade"),
        );
    }

    // boundary variant: an odd caloric field on (0, 1) vanishing at x = 0,
    // reflected across the flat boundary and checked at the old corner
    let half = Grid::new_1d(0.0, 1.0, p.nx, 0.0, 1.0, p.nt)?;
    let u_half = HeatField::from_fn_1d(half, Provenance::Analytic, |x, t| {
        heat_kernel(&[x], t, &[0.35], -0.5, 1) - heat_kernel(&[x], t, &[-0.35], -0.5, 1)
    })?;
    let reflected = odd_reflection_1d(&u_half)?;
    let mut cs = Vec::new();
    for step in 0..p.r_points {
        let r = p.r_lo * 10f64.powf(step as f64 / (p.r_points - 1) as f64);
        let check = two_sphere_one_cylinder_check(
            &reflected,
            &[0.1],
            1.0,
            r,
            p.rho,
            p.big_r,
            eta1,
            1.0,
        )?;
        rows.push(vec![99.0, r, check.fitted_c, check.theta1]);
        cs.push(check.fitted_c);
    }
    let lo = cs.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = cs.iter().cloned().fold(0.0f64, f64::max);
    outcome.push(
        "boundary-odd-reflection",
        hi / lo <= ctx.tolerances.two_sphere_stability_factor,
        format!("fitted C in [{lo:.3}, {hi:.3}] over the r decade"),
    );

    util::write_csv_file(
        &ctx.path("two_sphere.csv"),
        &["field", "r", "fitted_c", "theta1"],
        &rows,
    )?;
    outcome.files.push(PathBuf::from("two_sphere.csv"));
    Ok(outcome)
}
