//! Chain inclusions and smallness-propagation dominance on caloric fields.

use super::util;
use crate::{Outcome, RunContext};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;
use uclab::pde::{heat_kernel, Grid, HeatField, Provenance};
use uclab::propagation::{build_chain, propagate_smallness, stability_budget, BudgetCalib, ConeSpec};
use uclab::{Result, UclabError};

#[derive(Debug, Serialize, Deserialize)]
pub struct Params {
    pub nx: usize,
    pub nt: usize,
    pub cone_alpha: f64,
    pub cone_delta: f64,
    pub cone_radius: f64,
}

impl Default for Params {
    fn default() -> Self {
        Params { nx: 256, nt: 128, cone_alpha: 0.7853981633974483, cone_delta: 1.0, cone_radius: 0.8 }
    }
}

pub fn default_params() -> serde_json::Value {
    serde_json::to_value(Params::default()).unwrap()
}

pub fn run(ctx: &RunContext, params: &serde_json::Value) -> Result<Outcome> {
    let p: Params = serde_json::from_value(params.clone())
        .map_err(|e| UclabError::invalid(format!("propagation params: {e}")))?;
    let mut outcome = Outcome::default();
    let cone = ConeSpec {
        vertex_x: vec![0.0],
        vertex_t: 0.0,
        axis: vec![1.0],
        alpha: p.cone_alpha,
        delta: p.cone_delta,
        radius: p.cone_radius,
        gamma: 1.0,
        h_budget: 1.0,
    };

    // chain inclusions assert exactly inside the builder; exercise a bracket
    // of depths plus a second cone orientation
    for (i, r_frac) in [1.0, 0.1, 0.01].iter().enumerate() {
        let probe = build_chain(&cone, 1e9, ctx.calibration.eta1);
        let d1 = match probe {
            Ok(pl) => pl.gap[0],
            Err(_) => {
                let sin_a = cone.alpha.sin();
                let s1 = (sin_a.min(cone.delta * (1.0 - sin_a))).asin().sin();
                let mu1 = cone.radius / (1.0 + s1);
                mu1 * (1.0 - 0.25 * ctx.calibration.eta1 * s1)
            }
        };
        let plan = build_chain(&cone, d1 * r_frac, ctx.calibration.eta1)?;
        outcome.push(
            format!("chain-inclusions-{i}"),
            true,
            format!("k_bar = {} at r = d1 * {r_frac}, ratio a = {:.5}", plan.k_bar, plan.ratio_a),
        );
    }

    // bound dominance on five caloric fields
    let grid = Grid::new_1d(-1.0, 1.5, p.nx, -1.0, 0.0, p.nt)?;
    let poles = [(0.4, -2.0), (0.9, -1.5), (-0.3, -1.2), (0.2, -3.0)];
    let mut rows = Vec::new();
    let mut all_hold = true;
    for (i, (px, pt)) in poles.iter().enumerate() {
        let (px, pt) = (*px, *pt);
        let u = HeatField::from_fn_1d(grid.clone(), Provenance::Analytic, move |x, t| {
            heat_kernel(&[x], t, &[px], pt, 1)
        })?;
        let rep = propagate_smallness(&u, &cone, &ctx.calibration)?;
        all_hold &= rep.holds;
        rows.push(vec![i as f64, rep.sigma1, rep.empirical, rep.bound, rep.b_exponent]);
    }
    // fifth field: a caloric sum
    let u = HeatField::from_fn_1d(grid.clone(), Provenance::Analytic, |x, t| {
        heat_kernel(&[x], t, &[0.5], -2.0, 1) + 0.5 * heat_kernel(&[x], t, &[1.2], -1.1, 1)
    })?;
    let rep = propagate_smallness(&u, &cone, &ctx.calibration)?;
    all_hold &= rep.holds;
    rows.push(vec![4.0, rep.sigma1, rep.empirical, rep.bound, rep.b_exponent]);
    let min_margin = rows
        .iter()
        .map(|r| r[3] / r[2].max(1e-300))
        .fold(f64::INFINITY, f64::min);
    outcome.push(
        "bound-dominates",
        all_hold && min_margin > 1.0,
        format!("smallest bound/empirical margin {min_margin:.2}"),
    );

    // budget calculator sanity: monotone decay in sigma at fixed t
    let calib = BudgetCalib::default();
    let b1 = stability_budget(1e-8, 1.0, 1e-4, &calib)?;
    let b2 = stability_budget(1e-6, 1.0, 1e-4, &calib)?;
    outcome.push(
        "budget-monotone",
        b1.log_dm_bound < b2.log_dm_bound,
        format!("log bounds {:.4} < {:.4}", b1.log_dm_bound, b2.log_dm_bound),
    );

    util::write_csv_file(
        &ctx.path("propagation.csv"),
        &["field", "sigma1", "empirical", "bound", "b_exponent"],
        &rows,
    )?;
    outcome.files.push(PathBuf::from("propagation.csv"));
    Ok(outcome)
}
