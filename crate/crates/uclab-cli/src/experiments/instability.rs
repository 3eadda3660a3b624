//! DtN instability experiments: the analytic-oracle cross-check, matrix
//! entry decay, and the pigeonhole search over discrete families.

use super::util;
use crate::{Outcome, RunContext};
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::PathBuf;
use uclab::geometry::{generate_discrete_family, keyed_family, BoundaryCurve};
use uclab::instability::{
    adjointness_residual, assemble_dtn_matrix, decay_fit, instability_search, mollify_g,
    reference_flux, WeightedBasis,
};
use uclab::pde::{solve_heat_moving, Grid};
use uclab::{Result, UclabError};

#[derive(Debug, Serialize, Deserialize)]
pub struct Params {
    /// which sub-experiments to run: any of "oracle", "decay", "search"
    pub modes: Vec<String>,
    pub n_basis: usize,
    pub nx: usize,
    pub nt: usize,
    /// oracle cross-check goes up to this basis index
    pub oracle_n_max: usize,
    /// bump family class for the decay mode
    pub family_m: usize,
    pub family_b: f64,
    pub family_delta: f64,
    /// search sweep levels and the keyed-family shape
    pub search_deltas: Vec<f64>,
    pub search_count: usize,
    pub search_slots: usize,
    /// carrier scale: omega = sqrt(omega_c / delta)
    pub search_omega_c: f64,
    pub search_amp_margin: f64,
    pub search_nx: usize,
    pub search_nt: usize,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            modes: vec!["oracle".into(), "decay".into()],
            n_basis: 16,
            nx: 128,
            nt: 4096,
            oracle_n_max: 16,
            family_m: 2,
            family_b: 10.0,
            family_delta: 0.1,
            search_deltas: vec![0.2, 0.1, 0.05, 0.025],
            search_count: 32,
            search_slots: 5,
            search_omega_c: 120.0,
            search_amp_margin: 1.06,
            search_nx: 96,
            search_nt: 6144,
        }
    }
}

pub fn default_params() -> serde_json::Value {
    serde_json::to_value(Params::default()).unwrap()
}

fn strip_grid(nx: usize, nt: usize) -> Result<Grid> {
    Grid::new_1d(0.0, 1.0, nx, 0.0, 2.0 * std::f64::consts::PI, nt)
}

fn run_oracle(ctx: &RunContext, p: &Params, outcome: &mut Outcome) -> Result<()> {
    let grid = strip_grid(p.nx, p.nt)?;
    let s_ref = BoundaryCurve::constant_one(0.0, 2.0 * std::f64::consts::PI, 2, 10.0, 64);
    let basis = WeightedBasis::new(p.oracle_n_max);
    let t_grid: Vec<f64> = (0..=grid.nt).map(|j| grid.t(j)).collect();
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    for n in 1..=p.oracle_n_max {
        let w_n = basis.weight(n);
        let datum = move |t: f64| {
            w_n * (0.5 * n as f64 * t).sin() / std::f64::consts::PI.sqrt() * mollify_g(t)
        };
        let (_, flux) = solve_heat_moving(&s_ref, datum, &grid)?;
        let oracle = reference_flux(n, w_n, &t_grid, 15.0, 4e-3);
        let num: f64 = flux.iter().zip(&oracle).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        let den: f64 = oracle.iter().map(|b| b * b).sum::<f64>().sqrt();
        let rel = num / den;
        worst = worst.max(rel);
        rows.push(vec![n as f64, rel]);
    }
    outcome.push(
        "flux-oracle",
        worst < ctx.tolerances.dtn_oracle_rel,
        format!("max relative L2 error {worst:.2e} for n <= {}", p.oracle_n_max),
    );
    util::write_csv_file(&ctx.path("oracle_errors.csv"), &["n", "relative_l2"], &rows)?;
    outcome.files.push(PathBuf::from("oracle_errors.csv"));
    Ok(())
}

fn run_decay(ctx: &RunContext, p: &Params, outcome: &mut Outcome) -> Result<()> {
    let span = (std::f64::consts::FRAC_PI_2, 1.5 * std::f64::consts::PI);
    let fam = generate_discrete_family(p.family_m, p.family_b, p.family_delta, 2, span.0, span.1)?;
    let s = &fam[1];
    let grid = strip_grid(p.nx / 2, p.nt / 4)?;
    let fine = strip_grid(p.nx, p.nt / 2)?;

    // the reference boundary itself must produce the zero matrix
    let zero = assemble_dtn_matrix(&fam[0], p.n_basis.min(8), &grid)?;
    outcome.push(
        "null-at-reference",
        zero.entries.amax() < 1e-12,
        format!("|M(s0)| = {:.2e}", zero.entries.amax()),
    );

    let m_coarse = assemble_dtn_matrix(s, p.n_basis, &grid)?;
    let m_fine = assemble_dtn_matrix(s, p.n_basis, &fine)?;
    let fit_c = decay_fit(&m_coarse)?;
    let fit_f = decay_fit(&m_fine)?;
    let drift = (fit_c.k_rate / fit_f.k_rate - 1.0).abs();
    outcome.push(
        "decay-rate-positive",
        fit_f.k_rate > 0.0,
        format!("fitted k = {:.3}, K = {:.3e}", fit_f.k_rate, fit_f.big_k),
    );
    outcome.push(
        "decay-rate-stable",
        drift < ctx.tolerances.decay_fit_drift,
        format!("refinement drift {:.1}%", drift * 100.0),
    );

    let adj = adjointness_residual(s, p.n_basis.min(8), &grid)?;
    let scale = m_coarse.entries.amax();
    outcome.push(
        "adjointness",
        adj < 0.05 * scale + 1e-8,
        format!("residual {adj:.2e} against entry scale {scale:.2e}"),
    );

    let mut f = std::fs::File::create(ctx.path("dtn_matrix.csv"))?;
    m_fine.write_csv(&mut f)?;
    outcome.files.push(PathBuf::from("dtn_matrix.csv"));
    let meta = serde_json::json!({
        "n_basis": m_fine.n_basis,
        "nx": m_fine.nx,
        "nt": m_fine.nt,
        "fitted_k": fit_f.k_rate,
        "fitted_big_k": fit_f.big_k,
        "family": {"m": p.family_m, "b": p.family_b, "delta": p.family_delta},
    });
    let mut f = std::fs::File::create(ctx.path("dtn_matrix.json"))?;
    writeln!(f, "{}", serde_json::to_string_pretty(&meta)?)?;
    outcome.files.push(PathBuf::from("dtn_matrix.json"));
    Ok(())
}

fn run_search(ctx: &RunContext, p: &Params, outcome: &mut Outcome) -> Result<()> {
    let span = (std::f64::consts::FRAC_PI_2, 1.5 * std::f64::consts::PI);
    let grid = strip_grid(p.search_nx, p.search_nt)?;
    let mut rows = Vec::new();
    let mut verdicts = Vec::new();
    let mut norms = Vec::new();
    for &delta in &p.search_deltas {
        let omega = (p.search_omega_c / delta).sqrt();
        let amp = p.search_amp_margin * delta;
        // fixed class across the sweep: the C^2 budget is set by the carrier
        let b_class = 1.0 + amp + 0.75 * p.search_amp_margin * p.search_omega_c;
        let fam = keyed_family(
            amp,
            p.search_slots,
            omega,
            2,
            b_class,
            span.0,
            span.1,
            p.search_count,
            8192,
        )?;
        let verdict = instability_search(&fam, delta, p.n_basis, &grid)?;
        rows.push(vec![delta, verdict.norm, verdict.d0, verdict.pigeonhole.epsilon1_threshold]);
        norms.push((delta, verdict.norm));
        outcome.push(
            format!("search-pair-discrete-{delta}"),
            verdict.d0 >= delta,
            format!("pair ({}, {}) at d0 = {:.4}", verdict.s1_id, verdict.s2_id, verdict.d0),
        );
        verdicts.push(serde_json::to_value(&verdict).unwrap());
    }
    // super-polynomial surrogate: consecutive norms drop faster than delta^4
    let mut super_poly = true;
    let mut detail = String::new();
    for w in norms.windows(2) {
        let (d0, n0) = w[0];
        let (d1, n1) = w[1];
        let slope = (n0 / n1).ln() / (d0 / d1).ln();
        detail.push_str(&format!("slope({d0}->{d1}) = {slope:.2}; "));
        if slope <= 4.0 {
            super_poly = false;
        }
    }
    outcome.push("super-polynomial-decay", super_poly, detail);

    util::write_csv_file(
        &ctx.path("search_sweep.csv"),
        &["delta", "pair_norm", "pair_d0", "epsilon1_threshold"],
        &rows,
    )?;
    let mut f = std::fs::File::create(ctx.path("search_verdicts.json"))?;
    writeln!(f, "{}", serde_json::to_string_pretty(&verdicts)?)?;
    util::write_svg_file(
        &ctx.path("search_sweep.svg"),
        "Instability search: closest-pair norms",
        "delta",
        "operator norm",
        &[uclab::output::Series {
            label: "pair norm",
            points: norms,
        }],
    )?;
    outcome.files.push(PathBuf::from("search_sweep.csv"));
    outcome.files.push(PathBuf::from("search_verdicts.json"));
    outcome.files.push(PathBuf::from("search_sweep.svg"));
    Ok(())
}

pub fn run(ctx: &RunContext, params: &serde_json::Value) -> Result<Outcome> {
    let p: Params = serde_json::from_value(params.clone())
        .map_err(|e| UclabError::invalid(format!("instability params: {e}")))?;
    for m in &p.modes {
        if !["oracle", "decay", "search"].contains(&m.as_str()) {
            return Err(UclabError::invalid(format!("instability: unknown mode '{m}'")));
        }
    }
    let mut outcome = Outcome::default();
    if p.modes.iter().any(|m| m == "oracle") {
        run_oracle(ctx, &p, &mut outcome)?;
    }
    if p.modes.iter().any(|m| m == "decay") {
        run_decay(ctx, &p, &mut outcome)?;
    }
    if p.modes.iter().any(|m| m == "search") {
        run_search(ctx, &p, &mut outcome)?;
    }
    Ok(outcome)
}
