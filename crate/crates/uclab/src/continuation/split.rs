//! Splitting u = u1 + u2 at t = 1: u1 evolves the initial data with zero
//! boundary values, u2 carries the (cut-off, reflected) lateral data with
//! zero initial values.

use crate::pde::{
    solve_heat_fixed, Coefficients, DirichletBc, EigenSystem, Grid, HeatField, Provenance,
    SolveOptions,
};
use crate::{Result, UclabError};

/// Outcome of the split. `u1` is the eigen-series evolution sampled on the
/// same grid as `u2`; `alpha` holds the eigen coefficients of u(., 0).
pub struct SplitSolution {
    pub u1: HeatField,
    pub u2: HeatField,
    pub alpha: Vec<f64>,
    /// relative eigen-expansion tail energy of the initial data
    pub tail_energy: f64,
}

/// C^1 cutoff: 1 on [0, 1], 0 on [2, inf), quintic ramp between.
pub fn eta_cutoff(t: f64) -> f64 {
    if t <= 1.0 {
        1.0
    } else if t >= 2.0 {
        0.0
    } else {
        let s = t - 1.0;
        1.0 - s * s * s * (10.0 - 15.0 * s + 6.0 * s * s)
    }
}

/// The reflected lateral trace on (0, 2) built directly from the original
/// trace g: g(t) below 1, `-3 g(2 - t) + 4 g(3/2 - t/2)` above, multiplied by
/// the cutoff. Exact evaluation keeps the refined u2 solve second order.
pub fn reflected_trace(g: impl Fn(f64) -> f64) -> impl Fn(f64) -> f64 {
    move |t: f64| {
        let base = if t <= 1.0 {
            g(t)
        } else if t < 2.0 {
            -3.0 * g(2.0 - t) + 4.0 * g(1.5 - 0.5 * t)
        } else {
            0.0
        };
        eta_cutoff(t) * base
    }
}

/// Splits a solution of the time-independent-coefficient equation on
/// B x (0, 1). The lateral traces are taken from `bc` (the data u was solved
/// with), so the u2 problem can be solved on a finer time grid `nt2`. The
/// kept eigen modes must capture the initial data up to `tail_tol` relative
/// energy, else the truncation is rejected.
pub fn split_solution(
    u: &HeatField,
    eig: &EigenSystem,
    coeffs: &Coefficients,
    bc: &DirichletBc,
    tail_tol: f64,
    nt2: usize,
) -> Result<SplitSolution> {
    let g = &u.grid;
    if g.dim() != 1 {
        return Err(UclabError::invalid("split_solution: 1D fields only"));
    }
    if g.nx != eig.grid.nx || (g.x_lo, g.x_hi) != (eig.grid.x_lo, eig.grid.x_hi) {
        return Err(UclabError::invalid("split_solution: eigen system grid mismatch"));
    }

    // eigen coefficients of the initial slice (interior nodes)
    let init = u.slice_t(0);
    let interior = &init[1..g.nx];
    let h = g.hx();
    let n_modes = eig.len().min(64);
    let alpha: Vec<f64> = (0..n_modes).map(|k| eig.project(interior, k)).collect();
    let energy: f64 = interior.iter().map(|v| v * v * h).sum();
    let captured: f64 = alpha.iter().map(|a| a * a).sum();
    let tail_energy = if energy > 0.0 { ((energy - captured) / energy).max(0.0) } else { 0.0 };
    if tail_energy > tail_tol {
        return Err(UclabError::numerical(format!(
            "split_solution: eigen truncation tail energy {tail_energy} above {tail_tol}"
        )));
    }

    // u2: zero initial data, reflected cut-off traces, refined time grid
    let nxp = g.nx + 1;
    let grid2 = Grid::new_1d(g.x_lo, g.x_hi, g.nx, 0.0, 2.0, nt2)?;
    let (bx_lo, bx_hi) = (bc.x_lo.clone(), bc.x_hi.clone());
    let (xl, xh) = (g.x_lo, g.x_hi);
    let lo = reflected_trace(move |t| bx_lo(xl, 0.0, t));
    let hi = reflected_trace(move |t| bx_hi(xh, 0.0, t));
    let u2 = solve_heat_fixed(
        coeffs,
        &vec![0.0; nxp],
        &DirichletBc::ends_1d(lo, hi),
        &grid2,
        &SolveOptions::default(),
    )?;

    // u1: eigen series on the same grid
    let mut vals = Vec::with_capacity((nt2 + 1) * nxp);
    for j in 0..=nt2 {
        let t = grid2.t(j);
        for i in 0..nxp {
            if i == 0 || i == g.nx {
                vals.push(0.0);
                continue;
            }
            let mut s = 0.0;
            for (k, a) in alpha.iter().enumerate() {
                s += a * (eig.eigenvalues[k] * t).exp() * eig.eigenvectors[k][i - 1];
            }
            vals.push(s);
        }
    }
    let u1 = HeatField::new(grid2, vals, Provenance::Analytic)?;

    Ok(SplitSolution { u1, u2, alpha, tail_energy })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pde::eigen_dirichlet;
    use std::f64::consts::PI;

    fn setup(nx: usize, nt: usize) -> (Grid, Coefficients, EigenSystem) {
        let grid = Grid::new_1d(-1.0, 1.0, nx, 0.0, 1.0, nt).unwrap();
        let coeffs = Coefficients::constant(1.0);
        let eig_grid = Grid::new_1d(-1.0, 1.0, nx, 0.0, 1.0, 4).unwrap();
        let eig = eigen_dirichlet(&coeffs, &eig_grid).unwrap();
        (grid, coeffs, eig)
    }

    #[test]
    fn reflected_trace_is_c1_at_one() {
        let g = |t: f64| (PI * t).sin().powi(2) + 0.3 * t;
        let tr = reflected_trace(g);
        let h = 1e-6;
        // value and one-sided derivatives match up to O(h) and O(h g'')
        assert!((tr(1.0 - h) - tr(1.0 + h)).abs() < 1e-5);
        let dl = (tr(1.0) - tr(1.0 - h)) / h;
        let dr = (tr(1.0 + h) - tr(1.0)) / h;
        assert!((dl - dr).abs() < 1e-3, "left {dl} right {dr}");
        assert_eq!(tr(2.3), 0.0);
    }

    #[test]
    fn zero_initial_data_makes_u1_vanish() {
        let (grid, coeffs, eig) = setup(48, 128);
        let bc = DirichletBc::ends_1d(|t: f64| (PI * t).sin().powi(2), |_| 0.0);
        let u = solve_heat_fixed(
            &coeffs,
            &vec![0.0; 49],
            &bc,
            &grid,
            &SolveOptions::default(),
        )
        .unwrap();
        let split = split_solution(&u, &eig, &coeffs, &bc, 1e-10, 512).unwrap();
        assert_eq!(split.u1.linf(), 0.0);
        // u2(., 1) recovers u(., 1)
        let j1 = split.u2.grid.nt / 2;
        for i in 0..=grid.nx {
            assert!((split.u2.at_1d(i, j1) - u.at_1d(i, grid.nt)).abs() < 2e-4);
        }
    }

    #[test]
    fn zero_lateral_data_makes_u2_vanish() {
        let (grid, coeffs, eig) = setup(48, 128);
        let init: Vec<f64> = (0..=48).map(|i| (PI * (grid.x(i) + 1.0) / 2.0).sin()).collect();
        let bc = DirichletBc::ends_1d(|_| 0.0, |_| 0.0);
        let u = solve_heat_fixed(&coeffs, &init, &bc, &grid, &SolveOptions::default()).unwrap();
        let split = split_solution(&u, &eig, &coeffs, &bc, 1e-6, 256).unwrap();
        assert!(split.u2.linf() < 1e-12);
        let j1 = split.u1.grid.nt / 2;
        for i in 0..=grid.nx {
            assert!(
                (split.u1.at_1d(i, j1) - u.at_1d(i, grid.nt)).abs() < 1e-5,
                "u1(., 1) mismatch at {i}"
            );
        }
    }

    #[test]
    fn generic_solution_recomposes_at_t_one() {
        let (grid, coeffs, eig) = setup(64, 256);
        let init: Vec<f64> = (0..=64)
            .map(|i| {
                let z = (grid.x(i) + 1.0) / 2.0;
                (PI * z).sin() + 0.4 * (2.0 * PI * z).sin()
            })
            .collect();
        let bc = DirichletBc::ends_1d(
            |t: f64| (0.8 * PI * t).sin().powi(2),
            |t: f64| 0.5 * (PI * t).sin().powi(2),
        );
        let u = solve_heat_fixed(&coeffs, &init, &bc, &grid, &SolveOptions::default()).unwrap();
        let split = split_solution(&u, &eig, &coeffs, &bc, 1e-6, 1024).unwrap();
        let j1 = split.u2.grid.nt / 2;
        let mut worst = 0.0f64;
        for i in 0..=grid.nx {
            let recomposed = split.u1.at_1d(i, j1) + split.u2.at_1d(i, j1);
            worst = worst.max((recomposed - u.at_1d(i, grid.nt)).abs());
        }
        assert!(worst < 1e-6 * (1.0 + u.linf()) + 2e-4, "recomposition residual {worst}");
    }
}
