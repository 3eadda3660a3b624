//! Elliptic companion pipeline over a small suite of solutions.

use super::util;
use crate::{Outcome, RunContext};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;
use uclab::continuation::{build_companion, fourier_time, split_solution, CompanionParams};
use uclab::pde::{eigen_dirichlet, solve_heat_fixed, Coefficients, DirichletBc, Grid, SolveOptions};
use uclab::{Result, UclabError};

#[derive(Debug, Serialize, Deserialize)]
pub struct Params {
    pub nx: usize,
    pub nt: usize,
    pub nt_transform: usize,
    pub n_fft_log2: usize,
    pub max_keep: usize,
    pub ny: usize,
}

impl Default for Params {
    fn default() -> Self {
        Params { nx: 64, nt: 512, nt_transform: 16384, n_fft_log2: 18, max_keep: 24576, ny: 33 }
    }
}

pub fn default_params() -> serde_json::Value {
    serde_json::to_value(Params::default()).unwrap()
}

pub fn run(ctx: &RunContext, params: &serde_json::Value) -> Result<Outcome> {
    let p: Params = serde_json::from_value(params.clone())
        .map_err(|e| UclabError::invalid(format!("continuation params: {e}")))?;
    let mut outcome = Outcome::default();
    let coeffs = Coefficients::constant(1.0);
    let grid = Grid::new_1d(-1.0, 1.0, p.nx, 0.0, 1.0, p.nt)?;
    let eig = eigen_dirichlet(&coeffs, &grid)?;
    eig.check_orthonormality(ctx.tolerances.eigen_orthonormality)?;
    eig.check_spectral_gap(1.0)?;
    let comp_params = CompanionParams {
        ny: p.ny,
        nt2: p.nt_transform,
        n_fft: 1 << p.n_fft_log2,
        max_keep: p.max_keep,
    };

    const PI: f64 = std::f64::consts::PI;
    let suite: Vec<(&str, DirichletBc, Vec<f64>)> = vec![
        (
            "boundary-driven",
            DirichletBc::ends_1d(
                |t: f64| (PI * t).sin().powi(2),
                |t: f64| 0.6 * (2.0 * PI * t).sin().powi(2),
            ),
            vec![0.0; p.nx + 1],
        ),
        (
            "mixed-data",
            DirichletBc::ends_1d(|t: f64| 0.8 * (PI * t).sin().powi(2), |_| 0.0),
            (0..=p.nx)
                .map(|i| {
                    let z = (grid.x(i) + 1.0) / 2.0;
                    (PI * z).sin() + 0.3 * (2.0 * PI * z).sin()
                })
                .collect(),
        ),
        (
            "initial-only",
            DirichletBc::ends_1d(|_| 0.0, |_| 0.0),
            (0..=p.nx)
                .map(|i| {
                    let z = (grid.x(i) + 1.0) / 2.0;
                    (PI * z).sin() - 0.4 * (3.0 * PI * z).sin()
                })
                .collect(),
        ),
    ];

    let mut rows = Vec::new();
    for (idx, (label, bc, init)) in suite.into_iter().enumerate() {
        let u = solve_heat_fixed(&coeffs, &init, &bc, &grid, &SolveOptions::default())?;
        // recomposition identity at t = 1
        let split = split_solution(&u, &eig, &coeffs, &bc, 1e-8, p.nt_transform.min(4096))?;
        let j1 = split.u2.grid.nt / 2;
        let mut recompose = 0.0f64;
        for i in 0..=p.nx {
            recompose = recompose
                .max((split.u1.at_1d(i, j1) + split.u2.at_1d(i, j1) - u.at_1d(i, grid.nt)).abs());
        }
        // transform decay: fitted K in ||u_hat(., mu)|| <= K e^(-sqrt(mu) delta_bar)
        let delta_bar = 1.0 / (8.0 * PI * std::f64::consts::E);
        let fdata = fourier_time(&split.u2, &eig, &coeffs, 8192, 2048, 1.0, p.nx / 4, 3 * p.nx / 4)?;
        let mut fitted_k = 0.0f64;
        for (m, &mu) in fdata.mu.iter().enumerate() {
            let norm: f64 = fdata.values[m].iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            fitted_k = fitted_k.max(norm * (mu.sqrt() * delta_bar).exp());
        }

        let comp = build_companion(&u, &eig, &coeffs, &bc, 1.0, &comp_params, &ctx.tolerances)?;
        outcome.push(
            format!("companion-{label}"),
            comp.trace_err_rel < ctx.tolerances.companion_trace_rel
                && comp.neumann_err < ctx.tolerances.companion_neumann
                && comp.residual_rel < ctx.tolerances.companion_residual_rel,
            format!(
                "trace {:.2e}, neumann {:.2e}, residual {:.2e}, recomposition {:.2e}, K {:.3}",
                comp.trace_err_rel, comp.neumann_err, comp.residual_rel, recompose, fitted_k
            ),
        );
        rows.push(vec![
            idx as f64,
            comp.trace_err_rel,
            comp.neumann_err,
            comp.residual_rel,
            recompose,
            fitted_k,
        ]);
        if idx == 0 {
            let mut f = std::fs::File::create(ctx.path("companion_field.csv"))?;
            comp.write_csv(&mut f)?;
            outcome.files.push(PathBuf::from("companion_field.csv"));
        }
    }
    util::write_csv_file(
        &ctx.path("continuation.csv"),
        &["solution", "trace_rel", "neumann", "residual_rel", "recompose", "fitted_k"],
        &rows,
    )?;
    outcome.files.push(PathBuf::from("continuation.csv"));
    Ok(outcome)
}
