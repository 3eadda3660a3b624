//! Hoelder stability sweep from perturbed Cauchy data.

use super::util;
use crate::{Outcome, RunContext};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;
use uclab::output::Series;
use uclab::propagation::{cauchy_stability_experiment, CauchyConfig};
use uclab::{Result, UclabError};

#[derive(Debug, Serialize, Deserialize)]
pub struct Params {
    pub eps_list: Vec<f64>,
    pub trials: usize,
    pub nx_per_unit: usize,
    pub nt: usize,
    pub region_r: f64,
    pub zero_initial_variant: bool,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            eps_list: vec![1e-2, 3e-3, 1e-3, 3e-4, 1e-4, 3e-5, 1e-5, 3e-6, 1e-6],
            trials: 3,
            nx_per_unit: 96,
            nt: 512,
            region_r: 0.5,
            zero_initial_variant: false,
        }
    }
}

pub fn default_params() -> serde_json::Value {
    serde_json::to_value(Params::default()).unwrap()
}

pub fn run(ctx: &RunContext, params: &serde_json::Value) -> Result<Outcome> {
    let p: Params = serde_json::from_value(params.clone())
        .map_err(|e| UclabError::invalid(format!("cauchy-stability params: {e}")))?;
    let config = CauchyConfig {
        eps_list: p.eps_list,
        trials: p.trials,
        nx_per_unit: p.nx_per_unit,
        nt: p.nt,
        region_r: p.region_r,
        zero_initial_variant: p.zero_initial_variant,
        seed: ctx.seed.wrapping_add(101),
        ..Default::default()
    };
    let report = cauchy_stability_experiment(&config)?;
    let mut outcome = Outcome::default();
    outcome.push(
        "holder-exponent",
        report.s1 > 0.0 && report.s1 < 1.0,
        format!("fitted s1 = {:.3}", report.s1),
    );
    outcome.push(
        "held-out-dominated",
        report.held_out_dominated,
        format!("C = {:.3} dominates the held-out half", report.c_fit),
    );

    let rows: Vec<Vec<f64>> = report
        .points
        .iter()
        .map(|pt| {
            let err = if config.zero_initial_variant { pt.error_full_time } else { pt.error_interior };
            let bound = report.c_fit
                * (pt.eps_measured.powf(report.s1) * pt.energy.powf(1.0 - report.s1)
                    + pt.eps_measured);
            vec![pt.eps_measured, err, bound]
        })
        .collect();
    util::write_csv_file(&ctx.path("cauchy_sweep.csv"), &["eps", "error", "bound"], &rows)?;
    let measured: Vec<(f64, f64)> = rows.iter().map(|r| (r[0], r[1])).collect();
    let bounds: Vec<(f64, f64)> = rows.iter().map(|r| (r[0], r[2])).collect();
    util::write_svg_file(
        &ctx.path("cauchy_sweep.svg"),
        "Cauchy-data stability sweep",
        "eps",
        "interior L2 error",
        &[
            Series { label: "measured", points: measured },
            Series { label: "Hoelder bound", points: bounds },
        ],
    )?;
    outcome.files.push(PathBuf::from("cauchy_sweep.csv"));
    outcome.files.push(PathBuf::from("cauchy_sweep.svg"));
    Ok(outcome)
}
