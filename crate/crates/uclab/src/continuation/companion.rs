//! The elliptic companion field W(x, y) built from a parabolic solution: the
//! frequency route for the boundary-driven part and the eigen series for the
//! initial-data part. W solves div(a grad W) + W_yy = 0 near the t = 1 slice
//! and matches u(., 1) at y = 0 with vanishing normal derivative.

use super::{fourier_time, split_solution};
use crate::par::par_map_indexed;
use crate::pde::{Coefficients, DirichletBc, EigenSystem, HeatField};
use crate::tolerances::Tolerances;
use crate::{Result, UclabError};
use nalgebra::Complex;
use std::f64::consts::PI;
use std::io::Write;

type C64 = Complex<f64>;

/// Resolution knobs for the companion construction.
#[derive(Debug, Clone, Copy)]
pub struct CompanionParams {
    /// y nodes (odd count keeps y = 0 on the grid)
    pub ny: usize,
    /// time steps for the refined u2 solve on (0, 2)
    pub nt2: usize,
    /// zero-padded FFT length (sets d mu = pi nt2 / n_fft)
    pub n_fft: usize,
    /// frequency bins computed before the weighted cutoff is searched
    pub max_keep: usize,
}

impl Default for CompanionParams {
    fn default() -> Self {
        CompanionParams { ny: 33, nt2: 16384, n_fft: 1 << 18, max_keep: 24576 }
    }
}

/// Companion field on B_(1/2) x (-sqrt(2) delta_bar, sqrt(2) delta_bar).
pub struct EllipticCompanion {
    /// x nodes (a sub-range of the parent grid)
    pub xs: Vec<f64>,
    /// symmetric y nodes
    pub ys: Vec<f64>,
    /// total field, row-major [y][x]
    pub w: Vec<f64>,
    /// eigen-series component
    pub w1: Vec<f64>,
    /// frequency-route component
    pub w2: Vec<f64>,
    /// delta_bar = lambda / (8 pi e)
    pub delta_bar: f64,
    /// relative trace error max |W(x,0) - u(x,1)| / max |u(., 1)|
    pub trace_err_rel: f64,
    /// central-difference Neumann trace at y = 0 (scaled)
    pub neumann_err: f64,
    /// relative elliptic residual on interior nodes
    pub residual_rel: f64,
}

impl EllipticCompanion {
    pub fn at(&self, ix: usize, iy: usize) -> f64 {
        self.w[iy * self.xs.len() + ix]
    }

    /// Bilinear sampler for quadrature over balls.
    pub fn sampler(&self) -> impl Fn(f64, f64) -> f64 + '_ {
        move |x: f64, y: f64| {
            let nx = self.xs.len();
            let ny = self.ys.len();
            let hx = self.xs[1] - self.xs[0];
            let hy = self.ys[1] - self.ys[0];
            let px = ((x - self.xs[0]) / hx).clamp(0.0, (nx - 1) as f64);
            let py = ((y - self.ys[0]) / hy).clamp(0.0, (ny - 1) as f64);
            let (i, j) = ((px.floor() as usize).min(nx - 2), (py.floor() as usize).min(ny - 2));
            let (sx, sy) = (px - i as f64, py - j as f64);
            self.at(i, j) * (1.0 - sx) * (1.0 - sy)
                + self.at(i + 1, j) * sx * (1.0 - sy)
                + self.at(i, j + 1) * (1.0 - sx) * sy
                + self.at(i + 1, j + 1) * sx * sy
        }
    }

    /// CSV rows `x,y,w` (the HeatField format with the extra coordinate).
    pub fn write_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "x,y,w")?;
        for (iy, y) in self.ys.iter().enumerate() {
            for (ix, x) in self.xs.iter().enumerate() {
                writeln!(out, "{x},{y},{}", self.at(ix, iy))?;
            }
        }
        Ok(())
    }
}

/// Builds the companion of a solution on B_1 x (0, 1) with time-independent
/// coefficients. `bc` must be the Dirichlet data u was solved with; the
/// boundary-driven part is re-solved on a refined time grid for the
/// transform.
pub fn build_companion(
    u: &HeatField,
    eig: &EigenSystem,
    coeffs: &Coefficients,
    bc: &DirichletBc,
    lambda: f64,
    params: &CompanionParams,
    tol: &Tolerances,
) -> Result<EllipticCompanion> {
    let g = &u.grid;
    if g.dim() != 1 {
        return Err(UclabError::invalid("build_companion: 1D parabolic fields only"));
    }
    let delta_bar = lambda / (8.0 * PI * std::f64::consts::E);

    let split = split_solution(u, eig, coeffs, bc, tol.truncation_tail.max(1e-8), params.nt2)?;

    // x sub-range covering B_(1/2)
    let idx_lo = (0..=g.nx).find(|&i| g.x(i) >= -0.5).unwrap_or(1).max(1);
    let idx_hi = (0..=g.nx).rev().find(|&i| g.x(i) <= 0.5).unwrap_or(g.nx - 1).min(g.nx - 1);
    let xs: Vec<f64> = (idx_lo..=idx_hi).map(|i| g.x(i)).collect();

    let fdata = fourier_time(
        &split.u2,
        eig,
        coeffs,
        params.n_fft,
        params.max_keep,
        1.0,
        idx_lo,
        idx_hi,
    )?;
    let dmu = fdata.mu[1] - fdata.mu[0];

    // weighted cutoff: keep bins while the integrand envelope (with the
    // cosh amplification at the largest |y|) stays above 1e-10 of its peak;
    // beyond that the spectrum is discretization noise, not signal
    let y_max = 0.98 * 2.0f64.sqrt() * delta_bar;
    let row_norm = |row: &Vec<C64>| row.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let weighted: Vec<f64> = fdata
        .values
        .iter()
        .enumerate()
        .map(|(m, row)| row_norm(row) * ((fdata.mu[m] / 2.0).sqrt() * y_max).exp())
        .collect();
    let peak_w = weighted.iter().cloned().fold(0.0f64, f64::max);
    let m_cut = if peak_w == 0.0 {
        fdata.mu.len() - 1
    } else {
        // smallest m after the peak with 64 consecutive bins below threshold
        let threshold = 1e-10 * peak_w;
        let mut cut = None;
        let mut run = 0usize;
        for (m, &wv) in weighted.iter().enumerate() {
            if wv < threshold {
                run += 1;
                if run >= 64 {
                    cut = Some(m);
                    break;
                }
            } else {
                run = 0;
            }
        }
        cut.ok_or_else(|| {
            UclabError::numerical(
                "build_companion: frequency window failed to certify the tail",
            )
        })?
    };

    let ny = if params.ny % 2 == 0 { params.ny + 1 } else { params.ny };
    let ys: Vec<f64> = (0..ny)
        .map(|j| -y_max + 2.0 * y_max * j as f64 / (ny - 1) as f64)
        .collect();

    // w2 rows by frequency quadrature, w1 by the eigen series
    let nx_out = xs.len();
    let rows: Vec<(Vec<f64>, Vec<f64>)> = par_map_indexed(ny, |iy| {
        let y = ys[iy];
        let mut w1_row = vec![0.0; nx_out];
        let mut w2_row = vec![0.0; nx_out];
        for (col, i) in (idx_lo..=idx_hi).enumerate() {
            // eigen part: alpha_k e^(mu_k) phi_k(x) cosh(sqrt|mu_k| y)
            let mut acc = 0.0;
            for (k, a) in split.alpha.iter().enumerate() {
                let mu_k = eig.eigenvalues[k];
                acc += a * mu_k.exp() * eig.eigenvectors[k][i - 1] * ((-mu_k).sqrt() * y).cosh();
            }
            w1_row[col] = acc;

            // frequency part: (1/2pi) int e^(i mu) u_hat cosh(sqrt(-i mu) y);
            // conjugate symmetry turns the line integral into 2 Re of the
            // nonnegative-frequency trapezoid
            let mut sum = C64::new(0.0, 0.0);
            for m in 0..=m_cut {
                let mu = fdata.mu[m];
                let weight = if m == 0 || m == m_cut { 0.5 } else { 1.0 };
                let root = (mu / 2.0).sqrt();
                let z = C64::new(root * y, -root * y); // sqrt(-i mu) y, mu >= 0
                let integrand = C64::new(0.0, mu).exp() * fdata.values[m][col] * z.cosh();
                sum += integrand * weight;
            }
            w2_row[col] = 2.0 * sum.re * dmu / (2.0 * PI);
        }
        (w1_row, w2_row)
    });

    let mut w1 = Vec::with_capacity(ny * nx_out);
    let mut w2 = Vec::with_capacity(ny * nx_out);
    for (r1, r2) in rows {
        w1.extend(r1);
        w2.extend(r2);
    }
    let w: Vec<f64> = w1.iter().zip(&w2).map(|(a, b)| a + b).collect();

    // invariants: evenness, trace, Neumann, elliptic residual
    let mid = ny / 2;
    let mut even_err = 0.0f64;
    for iy in 0..ny {
        for ix in 0..nx_out {
            even_err = even_err.max((w[iy * nx_out + ix] - w[(ny - 1 - iy) * nx_out + ix]).abs());
        }
    }

    let u_slice = u.slice_t(g.nt);
    let u_scale = u_slice.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    let mut trace_err = 0.0f64;
    for (col, i) in (idx_lo..=idx_hi).enumerate() {
        trace_err = trace_err.max((w[mid * nx_out + col] - u_slice[i]).abs());
    }
    let trace_err_rel = trace_err / u_scale;

    let hy = ys[1] - ys[0];
    let mut neumann = 0.0f64;
    for ix in 0..nx_out {
        let d = (w[(mid + 1) * nx_out + ix] - w[(mid - 1) * nx_out + ix]) / (2.0 * hy);
        neumann = neumann.max(d.abs());
    }
    let neumann_err = neumann / u_scale;

    // discrete elliptic residual div(a grad W) + W_yy on interior nodes,
    // relative to the magnitude of the second-derivative terms themselves
    let hx = g.hx();
    let mut res_num = 0.0f64;
    let mut res_den = 0.0f64;
    for iy in 1..ny - 1 {
        for ix in 1..nx_out - 1 {
            let x = xs[ix];
            let am = coeffs.kappa_scalar(x - 0.5 * hx, 0.0, 0.0, 0.0);
            let ap = coeffs.kappa_scalar(x + 0.5 * hx, 0.0, 0.0, 0.0);
            let wxx = (ap * (w[iy * nx_out + ix + 1] - w[iy * nx_out + ix])
                - am * (w[iy * nx_out + ix] - w[iy * nx_out + ix - 1]))
                / (hx * hx);
            let wyy = (w[(iy + 1) * nx_out + ix] - 2.0 * w[iy * nx_out + ix]
                + w[(iy - 1) * nx_out + ix])
                / (hy * hy);
            res_num += (wxx + wyy) * (wxx + wyy);
            res_den += wxx * wxx + wyy * wyy;
        }
    }
    let residual_rel = (res_num / res_den.max(1e-300)).sqrt();

    let comp = EllipticCompanion {
        xs,
        ys,
        w,
        w1,
        w2,
        delta_bar,
        trace_err_rel,
        neumann_err,
        residual_rel,
    };
    if even_err > 1e-10 * u_scale {
        return Err(UclabError::Invariant(format!("companion: evenness residual {even_err}")));
    }
    if trace_err_rel > tol.companion_trace_rel {
        return Err(UclabError::Invariant(format!(
            "companion: trace error {trace_err_rel} above {}",
            tol.companion_trace_rel
        )));
    }
    if neumann_err > tol.companion_neumann {
        return Err(UclabError::Invariant(format!(
            "companion: Neumann residual {neumann_err} above {}",
            tol.companion_neumann
        )));
    }
    if residual_rel > tol.companion_residual_rel {
        return Err(UclabError::Invariant(format!(
            "companion: elliptic residual {residual_rel} above {}",
            tol.companion_residual_rel
        )));
    }
    Ok(comp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pde::{solve_heat_fixed, eigen_dirichlet, Grid, Provenance, SolveOptions};

    fn light_params() -> CompanionParams {
        CompanionParams { ny: 17, nt2: 2048, n_fft: 1 << 15, max_keep: 3000 }
    }

    #[test]
    fn zero_solution_gives_zero_companion() {
        let grid = Grid::new_1d(-1.0, 1.0, 32, 0.0, 1.0, 64).unwrap();
        let coeffs = Coefficients::constant(1.0);
        let eig = eigen_dirichlet(&coeffs, &grid).unwrap();
        let u = HeatField::from_fn_1d(grid, Provenance::Analytic, |_, _| 0.0).unwrap();
        let bc = DirichletBc::ends_1d(|_| 0.0, |_| 0.0);
        let comp =
            build_companion(&u, &eig, &coeffs, &bc, 1.0, &light_params(), &Tolerances::default())
                .unwrap();
        assert!(comp.w.iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn single_mode_zero_lateral_data_matches_series() {
        // u = phi_1 e^(mu_1 t): u2 = 0 and W = e^(mu_1) phi_1 cosh(sqrt|mu_1| y)
        let nx = 64;
        let grid = Grid::new_1d(-1.0, 1.0, nx, 0.0, 1.0, 128).unwrap();
        let coeffs = Coefficients::constant(1.0);
        let eig = eigen_dirichlet(&coeffs, &grid).unwrap();
        let phi1 = eig.eigenvectors[0].clone();
        let mu1 = eig.eigenvalues[0];
        let mut vals = Vec::new();
        for j in 0..=grid.nt {
            let t = grid.t(j);
            vals.push(0.0);
            for i in 1..nx {
                vals.push(phi1[i - 1] * (mu1 * t).exp());
            }
            vals.push(0.0);
        }
        let u = HeatField::new(grid.clone(), vals, Provenance::Analytic).unwrap();
        let bc = DirichletBc::ends_1d(|_| 0.0, |_| 0.0);
        let comp =
            build_companion(&u, &eig, &coeffs, &bc, 1.0, &light_params(), &Tolerances::default())
                .unwrap();
        for (iy, &y) in comp.ys.iter().enumerate().step_by(4) {
            for (ix, &x) in comp.xs.iter().enumerate().step_by(8) {
                let i_parent = ((x - grid.x_lo) / grid.hx()).round() as usize;
                let want = mu1.exp() * phi1[i_parent - 1] * ((-mu1).sqrt() * y).cosh();
                let got = comp.at(ix, iy);
                assert!(
                    (got - want).abs() < 1e-8 + 1e-8 * want.abs(),
                    "W({x}, {y}) = {got}, want {want}"
                );
            }
        }
    }

    #[test]
    fn boundary_driven_solution_companion_invariants() {
        let nx = 64;
        let grid = Grid::new_1d(-1.0, 1.0, nx, 0.0, 1.0, 512).unwrap();
        let coeffs = Coefficients::constant(1.0);
        let eig = eigen_dirichlet(&coeffs, &grid).unwrap();
        let bc = DirichletBc::ends_1d(
            |t: f64| (PI * t).sin().powi(2),
            |t: f64| 0.6 * (2.0 * PI * t).sin().powi(2),
        );
        let u = solve_heat_fixed(&coeffs, &vec![0.0; nx + 1], &bc, &grid, &SolveOptions::default())
            .unwrap();
        let comp = build_companion(
            &u,
            &eig,
            &coeffs,
            &bc,
            1.0,
            &CompanionParams::default(),
            &Tolerances::default(),
        )
        .unwrap();
        assert!(comp.trace_err_rel < 1e-4, "trace {}", comp.trace_err_rel);
        assert!(comp.neumann_err < 1e-4, "neumann {}", comp.neumann_err);
        assert!(comp.residual_rel < 1e-3, "residual {}", comp.residual_rel);
    }
}
