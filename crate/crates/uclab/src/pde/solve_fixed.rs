//! Trapezoidal (Crank-Nicolson) solver on fixed 1D intervals and 2D
//! rectangles. Second order in space and time; unconditionally stable, so the
//! long horizons of the instability experiments do not constrain the spatial
//! step. 2D uses an ADI factorization with a Craig-Sneyd correction pass when
//! the diffusion matrix has off-diagonal entries.

use super::{tridiag, Coefficients, DirichletBc, Grid, HeatField, Provenance, SolveOptions};
use crate::{Result, UclabError};

/// Solves the initial-boundary value problem on `grid` and returns the full
/// space-time field. `initial` holds one spatial level (see [`HeatField`]
/// layout). The corner compatibility `initial = boundary trace at t_lo` is
/// checked before any compute.
pub fn solve_heat_fixed(
    coeffs: &Coefficients,
    initial: &[f64],
    bc: &DirichletBc,
    grid: &Grid,
    opts: &SolveOptions,
) -> Result<HeatField> {
    grid.validate()?;
    if initial.len() != grid.space_len() {
        return Err(UclabError::invalid(format!(
            "initial data: {} values for {} nodes",
            initial.len(),
            grid.space_len()
        )));
    }
    match grid.dim() {
        1 => solve_1d(coeffs, initial, bc, grid, opts, None),
        _ => solve_2d(coeffs, initial, bc, grid, opts),
    }
}

/// 1D variant with a source term: `div(kappa grad u) + b du/dx + c u + f - du/dt = 0`.
pub fn solve_heat_fixed_with_source(
    coeffs: &Coefficients,
    initial: &[f64],
    bc: &DirichletBc,
    grid: &Grid,
    opts: &SolveOptions,
    source: &(dyn Fn(f64, f64) -> f64 + Sync),
) -> Result<HeatField> {
    grid.validate()?;
    if grid.dim() != 1 {
        return Err(UclabError::invalid("source solver: 1D only"));
    }
    if initial.len() != grid.space_len() {
        return Err(UclabError::invalid("initial data length mismatch"));
    }
    solve_1d(coeffs, initial, bc, grid, opts, Some(source))
}

fn corner_mismatch(a: f64, b: f64) -> bool {
    (a - b).abs() > 1e-8 * (1.0 + a.abs().max(b.abs()))
}

fn solve_1d(
    coeffs: &Coefficients,
    initial: &[f64],
    bc: &DirichletBc,
    grid: &Grid,
    opts: &SolveOptions,
    source: Option<&(dyn Fn(f64, f64) -> f64 + Sync)>,
) -> Result<HeatField> {
    let nx = grid.nx;
    let h = grid.hx();
    let k = grid.k();
    let t0 = grid.t_lo;

    let g_lo = |t: f64| (bc.x_lo)(grid.x_lo, 0.0, t);
    let g_hi = |t: f64| (bc.x_hi)(grid.x_hi, 0.0, t);
    if corner_mismatch(initial[0], g_lo(t0)) || corner_mismatch(initial[nx], g_hi(t0)) {
        return Err(UclabError::invalid(
            "initial data incompatible with the boundary trace at t = t_lo",
        ));
    }

    let mut values = Vec::with_capacity((grid.nt + 1) * (nx + 1));
    values.extend_from_slice(initial);

    let m = nx - 1; // interior nodes
    let mut lower = vec![0.0; m];
    let mut diag = vec![0.0; m];
    let mut upper = vec![0.0; m];
    let mut rhs = vec![0.0; m];
    let mut scratch = Vec::new();
    let mut u_prev = initial.to_vec();
    let mut u_next = vec![0.0; nx + 1];

    // Row of the spatial operator at interior node i: coefficients of
    // (u_{i-1}, u_i, u_{i+1}), evaluated at time t with state field `state`.
    let row = |i: usize, t: f64, state: &[f64]| -> (f64, f64, f64) {
        let xi = grid.x(i);
        let xm = xi - 0.5 * h;
        let xp = xi + 0.5 * h;
        let um = 0.5 * (state[i - 1] + state[i]);
        let up = 0.5 * (state[i] + state[i + 1]);
        let km = coeffs.kappa_scalar(xm, 0.0, t, um);
        let kp = coeffs.kappa_scalar(xp, 0.0, t, up);
        let b = coeffs.drift.as_ref().map_or(0.0, |b| b(xi, 0.0, t)[0]);
        let c = coeffs.reaction.as_ref().map_or(0.0, |c| c(xi, 0.0, t));
        let lo = km / (h * h) - b / (2.0 * h);
        let hi = kp / (h * h) + b / (2.0 * h);
        let mid = -(km + kp) / (h * h) + c;
        (lo, mid, hi)
    };

    for step in 0..grid.nt {
        let tn = grid.t(step);
        let tn1 = grid.t(step + 1);

        // explicit half: u^n + (k/2) [A(t_n, u^n) u^n + f(t_n)] + (k/2) f(t_{n+1})
        let mut rhs_base = vec![0.0; m];
        for i in 1..nx {
            let (lo, mid, hi) = row(i, tn, &u_prev);
            rhs_base[i - 1] = u_prev[i]
                + 0.5 * k * (lo * u_prev[i - 1] + mid * u_prev[i] + hi * u_prev[i + 1]);
            if let Some(f) = source {
                let x = grid.x(i);
                rhs_base[i - 1] += 0.5 * k * (f(x, tn) + f(x, tn1));
            }
        }
        let b_lo = g_lo(tn1);
        let b_hi = g_hi(tn1);

        // implicit half; for state-dependent kappa iterate on the state used
        // to evaluate A(t_{n+1}, .), starting from the lagged level.
        let mut state = u_prev.clone();
        let max_iter = if coeffs.state_dependent && opts.fixed_point { opts.fixed_point_max_iter } else { 1 };
        for it in 0..max_iter {
            for i in 1..nx {
                let (lo, mid, hi) = row(i, tn1, &state);
                lower[i - 1] = -0.5 * k * lo;
                diag[i - 1] = 1.0 - 0.5 * k * mid;
                upper[i - 1] = -0.5 * k * hi;
                rhs[i - 1] = rhs_base[i - 1];
            }
            // boundary contributions at the new level
            {
                let (lo, _, _) = row(1, tn1, &state);
                rhs[0] += 0.5 * k * lo * b_lo;
                let (_, _, hi) = row(nx - 1, tn1, &state);
                rhs[m - 1] += 0.5 * k * hi * b_hi;
            }
            tridiag::solve(&lower, &diag, &upper, &mut rhs, &mut scratch)?;
            u_next[0] = b_lo;
            u_next[nx] = b_hi;
            u_next[1..nx].copy_from_slice(&rhs);

            if max_iter == 1 {
                break;
            }
            let diff = u_next
                .iter()
                .zip(&state)
                .fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()));
            state.copy_from_slice(&u_next);
            if diff < opts.fixed_point_tol {
                break;
            }
            if it + 1 == max_iter {
                return Err(UclabError::numerical(
                    "state-dependent fixed point did not converge",
                ));
            }
        }

        values.extend_from_slice(&u_next);
        u_prev.copy_from_slice(&u_next);
    }

    HeatField::new(grid.clone(), values, Provenance::Solver)
}

struct Op2d<'a> {
    coeffs: &'a Coefficients,
    grid: &'a Grid,
}

impl Op2d<'_> {
    fn idx(&self, ix: usize, iy: usize) -> usize {
        iy * (self.grid.nx + 1) + ix
    }

    /// x-direction row at (ix, iy): coefficients of (u_{ix-1}, u_ix, u_{ix+1}).
    /// Carries half the reaction term; the other half rides with y.
    fn row_x(&self, ix: usize, iy: usize, t: f64, state: &[f64]) -> (f64, f64, f64) {
        let g = self.grid;
        let (hx, x, y) = (g.hx(), g.x(ix), g.y(iy));
        let um = 0.5 * (state[self.idx(ix - 1, iy)] + state[self.idx(ix, iy)]);
        let up = 0.5 * (state[self.idx(ix, iy)] + state[self.idx(ix + 1, iy)]);
        let km = (self.coeffs.kappa)(x - 0.5 * hx, y, t, um)[0][0];
        let kp = (self.coeffs.kappa)(x + 0.5 * hx, y, t, up)[0][0];
        let b = self.coeffs.drift.as_ref().map_or(0.0, |b| b(x, y, t)[0]);
        let c = self.coeffs.reaction.as_ref().map_or(0.0, |c| c(x, y, t));
        (
            km / (hx * hx) - b / (2.0 * hx),
            -(km + kp) / (hx * hx) + 0.5 * c,
            kp / (hx * hx) + b / (2.0 * hx),
        )
    }

    fn row_y(&self, ix: usize, iy: usize, t: f64, state: &[f64]) -> (f64, f64, f64) {
        let g = self.grid;
        let (hy, x, y) = (g.hy(), g.x(ix), g.y(iy));
        let um = 0.5 * (state[self.idx(ix, iy - 1)] + state[self.idx(ix, iy)]);
        let up = 0.5 * (state[self.idx(ix, iy)] + state[self.idx(ix, iy + 1)]);
        let km = (self.coeffs.kappa)(x, y - 0.5 * hy, t, um)[1][1];
        let kp = (self.coeffs.kappa)(x, y + 0.5 * hy, t, up)[1][1];
        let b = self.coeffs.drift.as_ref().map_or(0.0, |b| b(x, y, t)[1]);
        let c = self.coeffs.reaction.as_ref().map_or(0.0, |c| c(x, y, t));
        (
            km / (hy * hy) - b / (2.0 * hy),
            -(km + kp) / (hy * hy) + 0.5 * c,
            kp / (hy * hy) + b / (2.0 * hy),
        )
    }

    fn apply_x(&self, t: f64, u: &[f64], out: &mut [f64]) {
        let g = self.grid;
        for iy in 1..g.ny {
            for ix in 1..g.nx {
                let (lo, mid, hi) = self.row_x(ix, iy, t, u);
                out[self.idx(ix, iy)] = lo * u[self.idx(ix - 1, iy)]
                    + mid * u[self.idx(ix, iy)]
                    + hi * u[self.idx(ix + 1, iy)];
            }
        }
    }

    fn apply_y(&self, t: f64, u: &[f64], out: &mut [f64]) {
        let g = self.grid;
        for iy in 1..g.ny {
            for ix in 1..g.nx {
                let (lo, mid, hi) = self.row_y(ix, iy, t, u);
                out[self.idx(ix, iy)] = lo * u[self.idx(ix, iy - 1)]
                    + mid * u[self.idx(ix, iy)]
                    + hi * u[self.idx(ix, iy + 1)];
            }
        }
    }

    /// Mixed term d/dx(k12 du/dy) + d/dy(k12 du/dx), centered differences.
    fn apply_mixed(&self, t: f64, u: &[f64], out: &mut [f64]) {
        let g = self.grid;
        let (hx, hy) = (g.hx(), g.hy());
        let k12 = |ix: usize, iy: usize| (self.coeffs.kappa)(g.x(ix), g.y(iy), t, 0.0)[0][1];
        let dy = |ix: usize, iy: usize| {
            if iy == 0 || iy == g.ny {
                0.0
            } else {
                (u[self.idx(ix, iy + 1)] - u[self.idx(ix, iy - 1)]) / (2.0 * hy)
            }
        };
        let dx = |ix: usize, iy: usize| {
            if ix == 0 || ix == g.nx {
                0.0
            } else {
                (u[self.idx(ix + 1, iy)] - u[self.idx(ix - 1, iy)]) / (2.0 * hx)
            }
        };
        for iy in 1..g.ny {
            for ix in 1..g.nx {
                let t1 = (k12(ix + 1, iy) * dy(ix + 1, iy) - k12(ix - 1, iy) * dy(ix - 1, iy))
                    / (2.0 * hx);
                let t2 = (k12(ix, iy + 1) * dx(ix, iy + 1) - k12(ix, iy - 1) * dx(ix, iy - 1))
                    / (2.0 * hy);
                out[self.idx(ix, iy)] = t1 + t2;
            }
        }
    }

    fn has_mixed(&self, t: f64) -> bool {
        let g = self.grid;
        for iy in (0..=g.ny).step_by((g.ny / 4).max(1)) {
            for ix in (0..=g.nx).step_by((g.nx / 4).max(1)) {
                if (self.coeffs.kappa)(g.x(ix), g.y(iy), t, 0.0)[0][1].abs() > 0.0 {
                    return true;
                }
            }
        }
        false
    }
}

fn set_boundary_2d(grid: &Grid, bc: &DirichletBc, t: f64, u: &mut [f64]) {
    let nxp = grid.nx + 1;
    for ix in 0..=grid.nx {
        let x = grid.x(ix);
        u[ix] = bc.y_lo.as_ref().map_or(0.0, |f| f(x, grid.y_lo, t));
        u[grid.ny * nxp + ix] = bc.y_hi.as_ref().map_or(0.0, |f| f(x, grid.y_hi, t));
    }
    for iy in 0..=grid.ny {
        let y = grid.y(iy);
        u[iy * nxp] = (bc.x_lo)(grid.x_lo, y, t);
        u[iy * nxp + grid.nx] = (bc.x_hi)(grid.x_hi, y, t);
    }
}

/// One implicit sweep (I - theta k A_dir) out = rhs along x or y lines.
fn sweep(
    op: &Op2d,
    dir: usize,
    theta_k: f64,
    t: f64,
    state: &[f64],
    rhs: &[f64],
    out: &mut [f64],
) -> Result<()> {
    let g = op.grid;
    let mut scratch = Vec::new();
    if dir == 0 {
        let m = g.nx - 1;
        let (mut lower, mut diag, mut upper, mut r) =
            (vec![0.0; m], vec![0.0; m], vec![0.0; m], vec![0.0; m]);
        for iy in 1..g.ny {
            for ix in 1..g.nx {
                let (lo, mid, hi) = op.row_x(ix, iy, t, state);
                lower[ix - 1] = -theta_k * lo;
                diag[ix - 1] = 1.0 - theta_k * mid;
                upper[ix - 1] = -theta_k * hi;
                r[ix - 1] = rhs[op.idx(ix, iy)];
            }
            let (lo, _, _) = op.row_x(1, iy, t, state);
            r[0] += theta_k * lo * out[op.idx(0, iy)];
            let (_, _, hi) = op.row_x(g.nx - 1, iy, t, state);
            r[m - 1] += theta_k * hi * out[op.idx(g.nx, iy)];
            tridiag::solve(&lower, &diag, &upper, &mut r, &mut scratch)?;
            for ix in 1..g.nx {
                out[op.idx(ix, iy)] = r[ix - 1];
            }
        }
    } else {
        let m = g.ny - 1;
        let (mut lower, mut diag, mut upper, mut r) =
            (vec![0.0; m], vec![0.0; m], vec![0.0; m], vec![0.0; m]);
        for ix in 1..g.nx {
            for iy in 1..g.ny {
                let (lo, mid, hi) = op.row_y(ix, iy, t, state);
                lower[iy - 1] = -theta_k * lo;
                diag[iy - 1] = 1.0 - theta_k * mid;
                upper[iy - 1] = -theta_k * hi;
                r[iy - 1] = rhs[op.idx(ix, iy)];
            }
            let (lo, _, _) = op.row_y(ix, 1, t, state);
            r[0] += theta_k * lo * out[op.idx(ix, 0)];
            let (_, _, hi) = op.row_y(ix, g.ny - 1, t, state);
            r[m - 1] += theta_k * hi * out[op.idx(ix, g.ny)];
            tridiag::solve(&lower, &diag, &upper, &mut r, &mut scratch)?;
            for iy in 1..g.ny {
                out[op.idx(ix, iy)] = r[iy - 1];
            }
        }
    }
    Ok(())
}

fn solve_2d(
    coeffs: &Coefficients,
    initial: &[f64],
    bc: &DirichletBc,
    grid: &Grid,
    _opts: &SolveOptions,
) -> Result<HeatField> {
    let n = grid.space_len();
    let op = Op2d { coeffs, grid };
    let k = grid.k();
    let theta_k = 0.5 * k;

    // corner compatibility on the whole boundary frame
    {
        let mut frame = initial.to_vec();
        set_boundary_2d(grid, bc, grid.t_lo, &mut frame);
        for (a, b) in frame.iter().zip(initial) {
            if corner_mismatch(*a, *b) {
                return Err(UclabError::invalid(
                    "initial data incompatible with the boundary trace at t = t_lo",
                ));
            }
        }
    }

    let mut values = Vec::with_capacity((grid.nt + 1) * n);
    values.extend_from_slice(initial);
    let mut u = initial.to_vec();
    let (mut fx, mut fy, mut f0) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);

    for step in 0..grid.nt {
        let tn = grid.t(step);
        let tn1 = grid.t(step + 1);
        let mixed = op.has_mixed(tn);

        op.apply_x(tn, &u, &mut fx);
        op.apply_y(tn, &u, &mut fy);
        if mixed {
            op.apply_mixed(tn, &u, &mut f0);
        } else {
            f0.iter_mut().for_each(|v| *v = 0.0);
        }

        // Y0 = u + k F(t_n, u)
        let mut y0 = u.clone();
        for iy in 1..grid.ny {
            for ix in 1..grid.nx {
                let id = op.idx(ix, iy);
                y0[id] += k * (fx[id] + fy[id] + f0[id]);
            }
        }

        let predictor = |y0: &Vec<f64>, op: &Op2d| -> Result<Vec<f64>> {
            // (I - k/2 Ax(t_{n+1})) Y1 = Y0 - k/2 Ax(t_n) u^n
            let mut out = vec![0.0; n];
            set_boundary_2d(grid, bc, tn1, &mut out);
            let mut rhs = y0.clone();
            for iy in 1..grid.ny {
                for ix in 1..grid.nx {
                    let id = op.idx(ix, iy);
                    rhs[id] -= theta_k * fx[id];
                }
            }
            sweep(op, 0, theta_k, tn1, &u, &rhs, &mut out)?;
            // (I - k/2 Ay(t_{n+1})) Y2 = Y1 - k/2 Ay(t_n) u^n
            let mut out2 = vec![0.0; n];
            set_boundary_2d(grid, bc, tn1, &mut out2);
            let mut rhs2 = out.clone();
            for iy in 1..grid.ny {
                for ix in 1..grid.nx {
                    let id = op.idx(ix, iy);
                    rhs2[id] -= theta_k * fy[id];
                }
            }
            sweep(op, 1, theta_k, tn1, &u, &rhs2, &mut out2)?;
            Ok(out2)
        };

        let y2 = predictor(&y0, &op)?;
        let u_new = if mixed {
            // Craig-Sneyd correction: re-center the mixed term at the midpoint
            let mut f0_new = vec![0.0; n];
            op.apply_mixed(tn1, &y2, &mut f0_new);
            let mut y0c = y0;
            for iy in 1..grid.ny {
                for ix in 1..grid.nx {
                    let id = op.idx(ix, iy);
                    y0c[id] += 0.5 * k * (f0_new[id] - f0[id]);
                }
            }
            predictor(&y0c, &op)?
        } else {
            y2
        };

        values.extend_from_slice(&u_new);
        u = u_new;
    }

    HeatField::new(grid.clone(), values, Provenance::Solver)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn l2_1d(field: &HeatField, j: usize) -> f64 {
        let h = field.grid.hx();
        field.slice_t(j).iter().map(|v| v * v * h).sum::<f64>()
    }

    #[test]
    fn separable_exact_solution_1d() {
        let grid = Grid::new_1d(0.0, 1.0, 64, 0.0, 0.25, 256).unwrap();
        let init: Vec<f64> = (0..=64).map(|i| (PI * grid.x(i)).sin()).collect();
        let field = solve_heat_fixed(
            &Coefficients::constant(1.0),
            &init,
            &DirichletBc::ends_1d(|_| 0.0, |_| 0.0),
            &grid,
            &SolveOptions::default(),
        )
        .unwrap();
        let mut err = 0.0f64;
        for j in 0..=grid.nt {
            let decay = (-PI * PI * grid.t(j)).exp();
            for i in 0..=grid.nx {
                let exact = decay * (PI * grid.x(i)).sin();
                err = err.max((field.at_1d(i, j) - exact).abs());
            }
        }
        assert!(err < 2e-4, "L-inf error {err}");
    }

    #[test]
    fn zero_data_gives_zero_field() {
        let grid = Grid::new_1d(0.0, 1.0, 16, 0.0, 0.1, 8).unwrap();
        let field = solve_heat_fixed(
            &Coefficients::constant(1.0),
            &vec![0.0; 17],
            &DirichletBc::ends_1d(|_| 0.0, |_| 0.0),
            &grid,
            &SolveOptions::default(),
        )
        .unwrap();
        assert_eq!(field.linf(), 0.0);
    }

    #[test]
    fn incompatible_corner_rejected() {
        let grid = Grid::new_1d(0.0, 1.0, 16, 0.0, 0.1, 8).unwrap();
        let res = solve_heat_fixed(
            &Coefficients::constant(1.0),
            &vec![0.0; 17],
            &DirichletBc::ends_1d(|_| 1.0, |_| 0.0),
            &grid,
            &SolveOptions::default(),
        );
        assert!(res.is_err());
    }

    #[test]
    fn energy_dissipates_with_zero_dirichlet() {
        let grid = Grid::new_1d(0.0, 1.0, 48, 0.0, 0.2, 64).unwrap();
        let init: Vec<f64> = (0..=48)
            .map(|i| (PI * grid.x(i)).sin() + 0.5 * (3.0 * PI * grid.x(i)).sin())
            .collect();
        let field = solve_heat_fixed(
            &Coefficients::scalar_1d(|x| 1.0 + 0.5 * x, 0.5, 1.0),
            &init,
            &DirichletBc::ends_1d(|_| 0.0, |_| 0.0),
            &grid,
            &SolveOptions::default(),
        )
        .unwrap();
        let mut prev = l2_1d(&field, 0);
        for j in 1..=grid.nt {
            let cur = l2_1d(&field, j);
            assert!(cur <= prev * (1.0 + 1e-12), "energy grew at step {j}");
            prev = cur;
        }
    }

    #[test]
    fn max_principle_pure_diffusion() {
        let grid = Grid::new_1d(0.0, 1.0, 32, 0.0, 0.3, 128).unwrap();
        let init: Vec<f64> = (0..=32).map(|i| (PI * grid.x(i)).sin().powi(2)).collect();
        let field = solve_heat_fixed(
            &Coefficients::constant(0.7),
            &init,
            &DirichletBc::ends_1d(|_| 0.0, |_| 0.0),
            &grid,
            &SolveOptions::default(),
        )
        .unwrap();
        let hi = init.iter().cloned().fold(f64::MIN, f64::max);
        for v in &field.values {
            assert!(*v >= -1e-12 && *v <= hi + 1e-12);
        }
    }

    #[test]
    fn richardson_self_convergence_variable_kappa() {
        // kappa(x) = 1 + x/2, source-free: compare against the refined-grid
        // oracle at matching nodes; halving (h, k) must cut the error by >= 3.5.
        let run = |nx: usize, nt: usize| {
            let grid = Grid::new_1d(0.0, 1.0, nx, 0.0, 0.1, nt).unwrap();
            let init: Vec<f64> = (0..=nx).map(|i| (PI * grid.x(i)).sin()).collect();
            solve_heat_fixed(
                &Coefficients::scalar_1d(|x| 1.0 + 0.5 * x, 0.5, 0.5),
                &init,
                &DirichletBc::ends_1d(|_| 0.0, |_| 0.0),
                &grid,
                &SolveOptions::default(),
            )
            .unwrap()
        };
        let coarse = run(16, 16);
        let mid = run(32, 32);
        let fine = run(128, 128);
        let err = |f: &HeatField, refv: &HeatField| {
            let stride_x = refv.grid.nx / f.grid.nx;
            let stride_t = refv.grid.nt / f.grid.nt;
            let mut e = 0.0f64;
            for j in 0..=f.grid.nt {
                for i in 0..=f.grid.nx {
                    e = e.max((f.at_1d(i, j) - refv.at_1d(i * stride_x, j * stride_t)).abs());
                }
            }
            e
        };
        let e1 = err(&coarse, &fine);
        let e2 = err(&mid, &fine);
        assert!(e1 / e2 >= 3.5, "convergence ratio {} too small", e1 / e2);
    }

    #[test]
    fn separable_exact_solution_2d() {
        let grid = Grid::new_2d(0.0, 1.0, 24, 0.0, 1.0, 24, 0.0, 0.1, 64).unwrap();
        let exact = |x: f64, y: f64, t: f64| {
            (-2.0 * PI * PI * t).exp() * (PI * x).sin() * (PI * y).sin()
        };
        let init: Vec<f64> = {
            let mut v = Vec::new();
            for iy in 0..=grid.ny {
                for ix in 0..=grid.nx {
                    v.push(exact(grid.x(ix), grid.y(iy), 0.0));
                }
            }
            v
        };
        let field = solve_heat_fixed(
            &Coefficients::constant(1.0),
            &init,
            &DirichletBc::zero(),
            &grid,
            &SolveOptions::default(),
        )
        .unwrap();
        let mut err = 0.0f64;
        for j in 0..=grid.nt {
            for iy in 0..=grid.ny {
                for ix in 0..=grid.nx {
                    err = err
                        .max((field.at_2d(ix, iy, j) - exact(grid.x(ix), grid.y(iy), grid.t(j))).abs());
                }
            }
        }
        assert!(err < 2e-3, "2D L-inf error {err}");
    }

    #[test]
    fn mixed_terms_self_converge() {
        let kappa = |_: f64, _: f64, _: f64, _: f64| [[1.0, 0.3], [0.3, 1.2]];
        let coeffs = Coefficients {
            kappa: std::sync::Arc::new(kappa),
            drift: None,
            reaction: None,
            state_dependent: false,
            lambda: 0.5,
            lambda_lip: 0.0,
        };
        let run = |nx: usize, nt: usize| {
            let grid = Grid::new_2d(0.0, 1.0, nx, 0.0, 1.0, nx, 0.0, 0.05, nt).unwrap();
            let mut init = Vec::new();
            for iy in 0..=grid.ny {
                for ix in 0..=grid.nx {
                    init.push((PI * grid.x(ix)).sin() * (PI * grid.y(iy)).sin());
                }
            }
            solve_heat_fixed(&coeffs, &init, &DirichletBc::zero(), &grid, &SolveOptions::default())
                .unwrap()
        };
        let coarse = run(12, 12);
        let mid = run(24, 24);
        let fine = run(96, 96);
        let err = |f: &HeatField, r: &HeatField| {
            let sx = r.grid.nx / f.grid.nx;
            let st = r.grid.nt / f.grid.nt;
            let j = f.grid.nt;
            let mut e = 0.0f64;
            for iy in 0..=f.grid.ny {
                for ix in 0..=f.grid.nx {
                    e = e.max((f.at_2d(ix, iy, j) - r.at_2d(ix * sx, iy * sx, j * st)).abs());
                }
            }
            e
        };
        let ratio = err(&coarse, &fine) / err(&mid, &fine);
        assert!(ratio >= 3.0, "mixed-term convergence ratio {ratio}");
    }
}
