//! Dirichlet eigen-decomposition of the time-independent operator div(a grad .).

use super::{Coefficients, Grid};
use crate::{Result, UclabError};
use nalgebra::{DMatrix, DVector};
use std::f64::consts::PI;

/// Eigen-decomposition of the discretized operator with zero Dirichlet data.
/// Eigenvalues are sorted decreasing (all negative); eigenvectors are
/// L2-normalized on the grid (interior nodes, weight h) with a positive first
/// component, so the decomposition is deterministic.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    /// mu_1 >= mu_2 >= ... (all negative)
    pub eigenvalues: Vec<f64>,
    /// eigenvectors\[k\]\[i\]: value of phi_k at interior node i
    pub eigenvectors: Vec<Vec<f64>>,
    pub grid: Grid,
}

/// Decomposes div(a(x) grad .) on the grid's interval with zero Dirichlet
/// conditions. Requires time-independent coefficients (checked by sampling)
/// and a 1D grid; the discretization is symmetric by construction.
pub fn eigen_dirichlet(coeffs: &Coefficients, grid: &Grid) -> Result<EigenSystem> {
    grid.validate()?;
    if grid.dim() != 1 {
        return Err(UclabError::invalid(
            "eigen_dirichlet: only 1D interval operators are supported",
        ));
    }
    // time independence: compare kappa at t_lo and t_hi on the nodes
    for i in 0..=grid.nx {
        let x = grid.x(i);
        let a0 = coeffs.kappa_scalar(x, 0.0, grid.t_lo, 0.0);
        let a1 = coeffs.kappa_scalar(x, 0.0, grid.t_hi, 0.0);
        if (a0 - a1).abs() > 1e-12 * (1.0 + a0.abs()) {
            return Err(UclabError::invalid("eigen_dirichlet: coefficients depend on t"));
        }
    }
    if coeffs.drift.is_some() {
        return Err(UclabError::invalid(
            "eigen_dirichlet: drift makes the discretization non-symmetric",
        ));
    }

    let n = grid.nx - 1; // interior nodes
    let h = grid.hx();
    let mut a = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        let x = grid.x(i + 1);
        let km = coeffs.kappa_scalar(x - 0.5 * h, 0.0, grid.t_lo, 0.0);
        let kp = coeffs.kappa_scalar(x + 0.5 * h, 0.0, grid.t_lo, 0.0);
        a[(i, i)] = -(km + kp) / (h * h);
        if i > 0 {
            a[(i, i - 1)] = km / (h * h);
        }
        if i + 1 < n {
            a[(i, i + 1)] = kp / (h * h);
        }
    }
    let sym = nalgebra::SymmetricEigen::new(a);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        sym.eigenvalues[j]
            .partial_cmp(&sym.eigenvalues[i])
            .expect("finite eigenvalues")
    });

    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = Vec::with_capacity(n);
    for &idx in &order {
        eigenvalues.push(sym.eigenvalues[idx]);
        let col: DVector<f64> = sym.eigenvectors.column(idx).into();
        let norm = (col.iter().map(|v| v * v).sum::<f64>() * h).sqrt();
        let sign = col
            .iter()
            .find(|v| v.abs() > 1e-12)
            .map_or(1.0, |v| v.signum());
        eigenvectors.push(col.iter().map(|v| v * sign / norm).collect());
    }

    let sys = EigenSystem { eigenvalues, eigenvectors, grid: grid.clone() };
    sys.check_orthonormality(1e-10)?;
    Ok(sys)
}

impl EigenSystem {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Grid L2 inner product against interior values of `f`.
    pub fn project(&self, f_interior: &[f64], k: usize) -> f64 {
        let h = self.grid.hx();
        self.eigenvectors[k]
            .iter()
            .zip(f_interior)
            .map(|(p, v)| p * v * h)
            .sum()
    }

    /// `b1 = lambda / C_P` for the grid interval, with the Poincare constant
    /// of the interval (first Dirichlet eigenvalue of -d^2/dx^2 is
    /// (pi / length)^2).
    pub fn b1(&self, lambda: f64) -> f64 {
        let len = self.grid.x_hi - self.grid.x_lo;
        lambda * (PI / len).powi(2)
    }

    /// The first eigenvalue must satisfy mu_1 <= -b1 up to O(h^2).
    pub fn check_spectral_gap(&self, lambda: f64) -> Result<()> {
        let h = self.grid.hx();
        let b1 = self.b1(lambda);
        if self.eigenvalues[0] > -b1 + 4.0 * b1 * h * h {
            return Err(UclabError::Invariant(format!(
                "eigen: mu_1 = {} above -b1 = {}",
                self.eigenvalues[0], -b1
            )));
        }
        Ok(())
    }

    pub fn check_orthonormality(&self, tol: f64) -> Result<()> {
        let h = self.grid.hx();
        let kmax = self.len().min(24);
        for i in 0..kmax {
            for j in i..kmax {
                let dot: f64 = self.eigenvectors[i]
                    .iter()
                    .zip(&self.eigenvectors[j])
                    .map(|(a, b)| a * b * h)
                    .sum();
                let target = if i == j { 1.0 } else { 0.0 };
                if (dot - target).abs() > tol {
                    return Err(UclabError::Invariant(format!(
                        "eigen: orthonormality residual {} at ({i}, {j})",
                        (dot - target).abs()
                    )));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_grid(nx: usize) -> Grid {
        Grid::new_1d(-1.0, 1.0, nx, 0.0, 1.0, 4).unwrap()
    }

    #[test]
    fn explicit_spectrum_constant_coefficient() {
        let grid = unit_grid(256);
        let sys = eigen_dirichlet(&Coefficients::constant(1.0), &grid).unwrap();
        for k in 1..=6 {
            let exact = -(k as f64 * PI / 2.0).powi(2);
            let got = sys.eigenvalues[k - 1];
            // second-order eigenvalue error ~ |mu|^2 h^2 / 12
            assert!(
                (got - exact).abs() < exact * exact * grid.hx().powi(2) / 6.0,
                "mode {k}: {got} vs {exact}"
            );
        }
        sys.check_spectral_gap(1.0).unwrap();
    }

    #[test]
    fn spectrum_scales_linearly_in_constant_kappa() {
        let grid = unit_grid(128);
        let base = eigen_dirichlet(&Coefficients::constant(1.0), &grid).unwrap();
        let lam = 0.37;
        let scaled = eigen_dirichlet(&Coefficients::constant(lam), &grid).unwrap();
        for k in 0..10 {
            assert!(
                (scaled.eigenvalues[k] - lam * base.eigenvalues[k]).abs()
                    < 1e-10 * base.eigenvalues[k].abs(),
                "mode {k} did not scale exactly"
            );
        }
    }

    #[test]
    fn orthonormality_residual_tiny() {
        let grid = unit_grid(128);
        let sys =
            eigen_dirichlet(&Coefficients::scalar_1d(|x| 1.0 + 0.25 * x, 0.5, 0.5), &grid).unwrap();
        sys.check_orthonormality(1e-10).unwrap();
    }

    #[test]
    fn time_dependent_coefficients_rejected() {
        let grid = unit_grid(32);
        let coeffs = Coefficients::scalar_1d_state(|_, t, _| 1.0 + 0.1 * t, 0.5, 0.5);
        assert!(eigen_dirichlet(&coeffs, &grid).is_err());
    }
}
