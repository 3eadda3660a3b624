//! Moving-boundary solver in straightened coordinates.
//!
//! The problem on the physical domain 0 < x < s(t) is always solved on the
//! fixed strip (0, 1) via xi = x / s(t). The change of variables is exact, so
//! the free boundary introduces no interpolation error:
//!
//! `dw/dt = (1/s^2) d2w/dxi2 + (xi s'/s) dw/dxi`,
//! `w(0, t) = psi(t)`, `w(1, t) = 0`, `w(., t_lo) = 0`.
//!
//! The physical flux at the accessible side is recovered from
//! `-du/dx(0, t) = -(1/s(t)) dw/dxi(0, t)` with a second-order one-sided
//! difference (the unknown-boundary side has no ghost data).

use super::{tridiag, Grid, HeatField, Provenance};
use crate::geometry::BoundaryCurve;
use crate::{Result, UclabError};

/// Solves the straightened problem and returns the strip field together with
/// the flux trace `-du/dx(0, t)` on the time grid.
pub fn solve_heat_moving(
    s: &BoundaryCurve,
    psi: impl Fn(f64) -> f64,
    grid: &Grid,
) -> Result<(HeatField, Vec<f64>)> {
    grid.validate()?;
    if grid.dim() != 1 {
        return Err(UclabError::invalid("moving solver: grid must be 1D"));
    }
    if (grid.x_lo, grid.x_hi) != (0.0, 1.0) {
        return Err(UclabError::invalid("moving solver: strip grid must span [0, 1]"));
    }
    if (grid.t_lo - s.t_lo).abs() > 1e-12 || (grid.t_hi - s.t_hi).abs() > 1e-12 {
        return Err(UclabError::invalid("moving solver: grid and curve time spans differ"));
    }
    if psi(grid.t_lo).abs() > 1e-12 {
        return Err(UclabError::invalid(
            "moving solver: psi(t_lo) must vanish (zero initial data compatibility)",
        ));
    }

    let nx = grid.nx;
    let h = grid.hx();
    let k = grid.k();
    let m = nx - 1;

    let mut values = Vec::with_capacity((grid.nt + 1) * (nx + 1));
    values.extend(std::iter::repeat(0.0).take(nx + 1));

    let mut u_prev = vec![0.0; nx + 1];
    let mut u_next = vec![0.0; nx + 1];
    let (mut lower, mut diag, mut upper, mut rhs) =
        (vec![0.0; m], vec![0.0; m], vec![0.0; m], vec![0.0; m]);
    let mut scratch = Vec::new();

    // row coefficients of the straightened operator at (xi_i, t)
    let row = |i: usize, t: f64| -> Result<(f64, f64, f64)> {
        let sv = s.eval(t);
        if sv <= 1e-12 {
            return Err(UclabError::Degenerate(format!("moving solver: s({t}) = {sv} <= 0")));
        }
        let d = 1.0 / (sv * sv);
        let adv = grid.x(i) * s.deriv(t) / sv;
        Ok((
            d / (h * h) - adv / (2.0 * h),
            -2.0 * d / (h * h),
            d / (h * h) + adv / (2.0 * h),
        ))
    };

    for step in 0..grid.nt {
        let tn = grid.t(step);
        let tn1 = grid.t(step + 1);
        let b_new = psi(tn1);

        for i in 1..nx {
            let (lo_n, mid_n, hi_n) = row(i, tn)?;
            rhs[i - 1] = u_prev[i]
                + 0.5 * k * (lo_n * u_prev[i - 1] + mid_n * u_prev[i] + hi_n * u_prev[i + 1]);
            let (lo, mid, hi) = row(i, tn1)?;
            lower[i - 1] = -0.5 * k * lo;
            diag[i - 1] = 1.0 - 0.5 * k * mid;
            upper[i - 1] = -0.5 * k * hi;
        }
        let (lo, _, _) = row(1, tn1)?;
        rhs[0] += 0.5 * k * lo * b_new;
        // right boundary stays 0

        tridiag::solve(&lower, &diag, &upper, &mut rhs, &mut scratch)?;
        u_next[0] = b_new;
        u_next[nx] = 0.0;
        u_next[1..nx].copy_from_slice(&rhs);

        values.extend_from_slice(&u_next);
        u_prev.copy_from_slice(&u_next);
    }

    let field = HeatField::new(grid.clone(), values, Provenance::Solver)?;

    let mut flux = Vec::with_capacity(grid.nt + 1);
    for j in 0..=grid.nt {
        let t = grid.t(j);
        let w0 = field.at_1d(0, j);
        let w1 = field.at_1d(1, j);
        let w2 = field.at_1d(2, j);
        let dw = (-3.0 * w0 + 4.0 * w1 - w2) / (2.0 * h);
        flux.push(-dw / s.eval(t));
    }
    Ok((field, flux))
}
