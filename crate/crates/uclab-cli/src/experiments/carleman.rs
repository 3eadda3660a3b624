//! Carleman weight invariants and the randomized estimate audit.

use super::util;
use crate::{Outcome, RunContext};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;
use uclab::carleman::{
    carleman_audit_with_table, sigma, young_log_check, CarlemanTestFn, Metric1d, WeightConfig,
};
use uclab::par::par_map_indexed;
use uclab::{Result, UclabError};

#[derive(Debug, Serialize, Deserialize)]
pub struct Params {
    pub n_functions: usize,
    pub alphas: Vec<f64>,
    pub delta: f64,
    pub resolution: usize,
    pub sigma_nodes: usize,
}

impl Default for Params {
    fn default() -> Self {
        Params { n_functions: 100, alphas: vec![2.0, 4.0], delta: 0.3, resolution: 96, sigma_nodes: 256 }
    }
}

pub fn default_params() -> serde_json::Value {
    serde_json::to_value(Params::default()).unwrap()
}

fn random_case(rng: &mut ChaCha8Rng, cfg: &WeightConfig) -> (CarlemanTestFn, Metric1d) {
    // metric first: its Lipschitz budget sets the admissible support radius
    let eps: f64 = rng.gen_range(0.0..0.25);
    let freq: f64 = rng.gen_range(0.5..2.5);
    let g = Metric1d {
        g11: Arc::new(move |x: f64, s: f64| 1.0 + eps * ((freq * x).sin() + s * x).tanh() * x),
        dg11_dx: Arc::new(move |x: f64, s: f64| {
            let f = |x: f64| 1.0 + eps * ((freq * x).sin() + s * x).tanh() * x;
            (f(x + 1e-6) - f(x - 1e-6)) / 2e-6
        }),
        lambda: 0.5,
        lambda_lip: 1.0,
    };
    let eta0 = g.eta0();
    let s_max = cfg.support_s_max();
    let width_x = rng.gen_range(0.15..0.45) * eta0;
    let center_x = rng.gen_range(-0.9..0.9) * (eta0 - width_x).max(1e-3);
    let width_s = rng.gen_range(0.2..0.45) * s_max;
    // half the suite clips the s-bump at 0 to exercise the initial terms
    let center_s = if rng.gen_bool(0.5) {
        rng.gen_range(0.0..0.8) * width_s
    } else {
        rng.gen_range(width_s..(s_max - width_s).max(width_s * (1.0 + 1e-6)))
    };
    let u = CarlemanTestFn {
        amplitude: rng.gen_range(0.2..5.0),
        center_x,
        width_x,
        center_s: center_s.min(s_max - width_s * 1.001),
        width_s,
    };
    (u, g)
}

pub fn run(ctx: &RunContext, params: &serde_json::Value) -> Result<Outcome> {
    let p: Params = serde_json::from_value(params.clone())
        .map_err(|e| UclabError::invalid(format!("carleman-audit params: {e}")))?;
    if p.n_functions == 0 || p.alphas.is_empty() {
        return Err(UclabError::invalid("carleman-audit: empty suite"));
    }
    let mut outcome = Outcome::default();

    // weight invariants come first: the sigma table construction asserts the
    // two-sided bounds and the ODE residual at every node
    let probe_cfg = WeightConfig::new(p.alphas[0].max(2.0), p.delta, p.delta * p.delta / (8.0 * p.alphas[0]))?;
    let table = sigma(&probe_cfg, p.sigma_nodes)?;
    outcome.push(
        "sigma-invariants",
        true,
        format!("bounds hold at {} nodes, ODE residual {:.2e}", table.s.len(), table.ode_residual()),
    );

    // auxiliary inequality: fitted C(mu) stable under 4x grid refinement
    let grids = |n: usize| {
        let y: Vec<f64> = (0..n).map(|i| 60.0 * i as f64 / (n - 1) as f64).collect();
        let e: Vec<f64> = (1..n).map(|i| 10f64.powf(-8.0 * i as f64 / n as f64)).collect();
        (y, e)
    };
    let (y1, e1) = grids(400);
    let (y4, e4) = grids(1600);
    let c1 = young_log_check(1.5, &y1, &e1)?.c;
    let c4 = young_log_check(1.5, &y4, &e4)?.c;
    let drift = (c1 / c4 - 1.0).abs();
    outcome.push(
        "young-refinement",
        drift < ctx.tolerances.young_refine_rel,
        format!("C(3/2) = {c4:.5}, drift {:.2}% under 4x refinement", drift * 100.0),
    );

    // randomized audit suite
    let mut audits = Vec::new();
    let mut all_c: Vec<f64> = Vec::new();
    for &alpha in &p.alphas {
        let a_max = p.delta * p.delta / (4.0 * alpha);
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed.wrapping_add((alpha * 1000.0) as u64));
        let cases: Vec<(CarlemanTestFn, Metric1d, f64)> = (0..p.n_functions)
            .map(|_| {
                let a = rng.gen_range(0.2..1.0) * a_max;
                let cfg = WeightConfig::new(alpha, p.delta, a).expect("admissible config");
                let (u, g) = random_case(&mut rng, &cfg);
                (u, g, a)
            })
            .collect();
        let cfg0 = WeightConfig::new(alpha, p.delta, a_max)?;
        let table = sigma(&cfg0, p.sigma_nodes)?;
        let reports: Vec<Result<uclab::carleman::AuditReport>> =
            par_map_indexed(cases.len(), |i| {
                let (u, g, a) = &cases[i];
                let cfg = WeightConfig::new(alpha, p.delta, *a)?;
                carleman_audit_with_table(u, g, &cfg, &table, p.resolution)
            });
        for rep in reports {
            let rep = rep?;
            all_c.push(rep.fitted_c);
            audits.push(rep);
        }
    }
    let lo = all_c.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = all_c.iter().cloned().fold(0.0f64, f64::max);
    outcome.push(
        "audit-finite",
        all_c.iter().all(|c| c.is_finite()),
        format!("{} audits, fitted C in [{lo:.3}, {hi:.3}]", all_c.len()),
    );
    outcome.push(
        "audit-spread",
        hi / lo < ctx.tolerances.carleman_spread,
        format!("max/min = {:.2} (< {})", hi / lo, ctx.tolerances.carleman_spread),
    );

    // exact scale invariance on the first case
    {
        let cfg = WeightConfig::new(p.alphas[0], p.delta, 0.5 * p.delta * p.delta / (4.0 * p.alphas[0]))?;
        let table = sigma(&cfg, p.sigma_nodes)?;
        let base = CarlemanTestFn {
            amplitude: 1.0,
            center_x: 0.05,
            width_x: 0.4,
            center_s: 0.5 * cfg.support_s_max(),
            width_s: 0.3 * cfg.support_s_max(),
        };
        let mut scaled = base;
        scaled.amplitude = 2.0;
        let g = Metric1d::identity();
        let r1 = carleman_audit_with_table(&base, &g, &cfg, &table, p.resolution)?;
        let r2 = carleman_audit_with_table(&scaled, &g, &cfg, &table, p.resolution)?;
        let rel = ((r1.fitted_c - r2.fitted_c) / r1.fitted_c).abs();
        outcome.push(
            "scale-invariance",
            rel < ctx.tolerances.carleman_scale_invariance,
            format!("relative change {rel:.2e} under u -> 2u"),
        );
    }

    // artifacts: JSON reports and the CSV aggregate
    {
        let mut f = std::fs::File::create(ctx.path("audits.json"))?;
        let js: Vec<serde_json::Value> = audits
            .iter()
            .map(|r| {
                serde_json::json!({
                    "alpha": r.alpha,
                    "delta": r.delta,
                    "a": r.a,
                    "terms": {
                        "lhs_u": r.lhs_u,
                        "lhs_grad": r.lhs_grad,
                        "rhs_pu": r.rhs_pu,
                        "rhs_bulk": r.rhs_bulk,
                        "rhs_initial_u": r.rhs_initial_u,
                        "rhs_initial_grad": r.rhs_initial_grad,
                    },
                    "fitted_C": r.fitted_c,
                })
            })
            .collect();
        writeln!(f, "{}", serde_json::to_string_pretty(&js)?)?;
    }
    let rows: Vec<Vec<f64>> = audits
        .iter()
        .map(|r| vec![r.alpha, r.delta, r.a, r.fitted_c, r.lhs_u + r.lhs_grad, r.rhs_pu])
        .collect();
    util::write_csv_file(
        &ctx.path("audits.csv"),
        &["alpha", "delta", "a", "fitted_c", "lhs", "rhs_pu"],
        &rows,
    )?;
    outcome.files.push(PathBuf::from("audits.json"));
    outcome.files.push(PathBuf::from("audits.csv"));
    Ok(outcome)
}
