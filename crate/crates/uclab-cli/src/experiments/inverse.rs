//! Boundary reconstruction sweep and the stability-law comparison.

use super::util;
use crate::{Outcome, RunContext};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;
use std::sync::Arc;
use uclab::inverse::{make_instance, reconstruct, stability_curve};
use uclab::output::Series;
use uclab::pde::Grid;
use uclab::{Result, UclabError};

#[derive(Debug, Serialize, Deserialize)]
pub struct Params {
    /// true bump heights (also fixes param_dim unless overridden)
    pub s_star_heights: Vec<f64>,
    pub delta: f64,
    pub param_dim: usize,
    pub reg_weight: f64,
    pub eps_list: Vec<f64>,
    pub trials: usize,
    pub nx: usize,
    pub nt: usize,
    pub datum_amp: f64,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            s_star_heights: vec![0.06, 0.02, 0.05, 0.03],
            delta: 0.1,
            param_dim: 4,
            reg_weight: 1e-10,
            eps_list: vec![3e-4, 3e-5, 3e-6, 3e-7, 3e-8],
            trials: 5,
            nx: 64,
            nt: 256,
            datum_amp: 1.0,
        }
    }
}

pub fn default_params() -> serde_json::Value {
    serde_json::to_value(Params::default()).unwrap()
}

pub fn run(ctx: &RunContext, params: &serde_json::Value) -> Result<Outcome> {
    let p: Params = serde_json::from_value(params.clone())
        .map_err(|e| UclabError::invalid(format!("inverse-stability params: {e}")))?;
    if p.param_dim == 0 || p.param_dim > 12 {
        return Err(UclabError::invalid("inverse-stability: param_dim must lie in 1..=12"));
    }
    let mut outcome = Outcome::default();
    let grid = Grid::new_1d(0.0, 1.0, p.nx, 0.0, 1.0, p.nt)?;
    let s_star = uclab::inverse::candidate_curve(
        &p.s_star_heights,
        p.delta,
        0.0,
        1.0,
        2,
        60.0 * (1.0 + p.delta),
        256,
    )?;
    let amp = p.datum_amp;
    let datum: Arc<dyn Fn(f64) -> f64 + Send + Sync> = Arc::new(move |t: f64| {
        amp * ((std::f64::consts::PI * t).sin().powi(2)
            + 0.5 * (2.0 * std::f64::consts::PI * t).sin().powi(2))
    });
    let floor: Arc<dyn Fn(f64) -> f64 + Send + Sync> = Arc::new(|_| 0.0);

    // exact recovery at eps = 0 within 10x the forward-solver tolerance;
    // the tolerance is measured by flux self-convergence on a refined grid
    let clean = make_instance(s_star.clone(), datum.clone(), floor.clone(), 0.0, &grid, ctx.seed)?;
    let fine = Grid::new_1d(0.0, 1.0, 2 * p.nx, 0.0, 1.0, 2 * p.nt)?;
    let flux_coarse = uclab::inverse::forward_flux(&s_star, &datum, &grid)?;
    let flux_fine = uclab::inverse::forward_flux(&s_star, &datum, &fine)?;
    let solver_tol = flux_coarse
        .iter()
        .enumerate()
        .map(|(j, v)| (v - flux_fine[2 * j]).abs())
        .fold(0.0f64, f64::max);
    let rec = reconstruct(&clean, p.param_dim, p.reg_weight)?;
    outcome.push(
        "exact-recovery",
        rec.d0_error <= ctx.tolerances.exact_recovery_factor * solver_tol,
        format!(
            "d0 error {:.3e} vs {} x solver tolerance {:.3e}",
            rec.d0_error, ctx.tolerances.exact_recovery_factor, solver_tol
        ),
    );

    // noise sweep and the law comparison
    let table = stability_curve(&clean, &p.eps_list, p.trials, p.param_dim, p.reg_weight, ctx.seed)?;
    let monotone = table
        .rows
        .windows(2)
        .all(|w| w[1].mean_d0 <= w[0].mean_d0 * 1.25);
    outcome.push(
        "errors-nonincreasing",
        monotone,
        format!(
            "mean d0 from {:.3e} down to {:.3e}",
            table.rows.first().map(|r| r.mean_d0).unwrap_or(0.0),
            table.rows.last().map(|r| r.mean_d0).unwrap_or(0.0)
        ),
    );
    if let Some(fit) = table.fit {
        outcome.push(
            "log-law-wins",
            fit.log_wins,
            format!(
                "log RSS {:.4} vs power RSS {:.4} (C1 = {:.3}, C2 = {:.2}, p = {:.3})",
                fit.log_rss, fit.power_rss, fit.log_c1, fit.log_c2, fit.power_p
            ),
        );
    } else {
        outcome.push("log-law-wins", false, "not enough levels to fit");
    }

    let rows: Vec<Vec<f64>> = table
        .rows
        .iter()
        .map(|r| vec![r.eps, r.mean_d0, r.min_d0, r.max_d0])
        .collect();
    util::write_csv_file(
        &ctx.path("inverse_stability.csv"),
        &["eps", "mean_d0", "min_d0", "max_d0"],
        &rows,
    )?;
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r[0], r[1])).collect();
    let mut series = vec![Series { label: "mean d0 error", points: pts }];
    if let Some(fit) = table.fit {
        let fitted: Vec<(f64, f64)> = rows
            .iter()
            .map(|r| (r[0], fit.log_c1 * r[0].ln().abs().powf(-1.0 / fit.log_c2)))
            .collect();
        series.push(Series { label: "log-law fit", points: fitted });
    }
    util::write_svg_file(
        &ctx.path("inverse_stability.svg"),
        "Reconstruction stability curve",
        "eps",
        "d0 error",
        &series,
    )?;
    outcome.files.push(PathBuf::from("inverse_stability.csv"));
    outcome.files.push(PathBuf::from("inverse_stability.svg"));
    Ok(outcome)
}
