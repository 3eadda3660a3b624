//! Weighted sine basis on (0, 2 pi) and the mollifying multipliers.
//!
//! `psi_n(t) = sin(n t / 2)/sqrt(pi)` is orthonormal in L2((0, 2 pi)); the
//! weighted variants `psi_n / sqrt(1 + (n/2)^(2 sigma))` with sigma = 3/4
//! realize the fractional norms through their coefficients, and
//! `gamma_n = sqrt(n/2)` is the frequency functional of the abstract
//! instability theorem.

use crate::{Result, UclabError};
use std::f64::consts::PI;

/// Truncated weighted basis with its quadrature grid size.
#[derive(Debug, Clone)]
pub struct WeightedBasis {
    pub n_max: usize,
    /// weight exponent (3/4 throughout)
    pub sigma: f64,
}

impl WeightedBasis {
    pub fn new(n_max: usize) -> Self {
        WeightedBasis { n_max, sigma: 0.75 }
    }

    pub fn psi(&self, n: usize, t: f64) -> f64 {
        (0.5 * n as f64 * t).sin() / PI.sqrt()
    }

    /// 1 / sqrt(1 + (n/2)^(2 sigma))
    pub fn weight(&self, n: usize) -> f64 {
        1.0 / (1.0 + (0.5 * n as f64).powf(2.0 * self.sigma)).sqrt()
    }

    pub fn psi_tilde(&self, n: usize, t: f64) -> f64 {
        self.weight(n) * self.psi(n, t)
    }

    /// gamma(psi_tilde_n) = sqrt(n / 2)
    pub fn gamma(&self, n: usize) -> f64 {
        (0.5 * n as f64).sqrt()
    }

    /// Discrete L2 orthonormality residual of psi on a uniform grid with
    /// `nt` intervals (trapezoid).
    pub fn orthonormality_residual(&self, nt: usize) -> f64 {
        let k = 2.0 * PI / nt as f64;
        let mut worst = 0.0f64;
        for n in 1..=self.n_max {
            for m in n..=self.n_max {
                let mut acc = 0.0;
                for j in 0..=nt {
                    let w = if j == 0 || j == nt { 0.5 } else { 1.0 };
                    let t = j as f64 * k;
                    acc += w * self.psi(n, t) * self.psi(m, t) * k;
                }
                let target = if n == m { 1.0 } else { 0.0 };
                worst = worst.max((acc - target).abs());
            }
        }
        worst
    }
}

/// The mollifier `e^(-1/t) t^(-3/2)`, extended by 0 at t <= 0; all
/// derivatives vanish at the flattened endpoint.
pub fn mollify_g(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp() * t.powf(-1.5)
    }
}

/// The adjoint-side mollifier `e^(-1/(2 pi - t)) (2 pi - t)^(-3/2)`.
pub fn mollify_gstar(t: f64) -> f64 {
    mollify_g(2.0 * PI - t)
}

/// One row of the counting check: `N1(q) = #{n : gamma_n <= q} <= 2 (1+q)^2`.
#[derive(Debug, Clone, Copy)]
pub struct CountRow {
    pub q: u32,
    pub count: usize,
    pub bound: usize,
    pub holds: bool,
}

/// Counts basis indices with gamma_n <= q for each q and checks the bound.
pub fn counting_check(q_list: &[u32]) -> Result<Vec<CountRow>> {
    if q_list.iter().any(|&q| q == 0) {
        return Err(UclabError::invalid("counting_check: q must be positive"));
    }
    Ok(q_list
        .iter()
        .map(|&q| {
            // gamma_n = sqrt(n/2) <= q iff n <= 2 q^2
            let count = (2 * q * q) as usize;
            let bound = (2 * (1 + q) * (1 + q)) as usize;
            CountRow { q, count, bound, holds: count <= bound }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_is_discretely_orthonormal() {
        let basis = WeightedBasis::new(16);
        assert!(basis.orthonormality_residual(4096) < 1e-10);
    }

    #[test]
    fn gamma_strictly_increases() {
        let basis = WeightedBasis::new(32);
        for n in 1..32 {
            assert!(basis.gamma(n + 1) > basis.gamma(n));
        }
    }

    #[test]
    fn mollified_sine_is_y_n() {
        // psi_n * mollifier reproduces y_n(t) = e^(-1/t) t^(-3/2) sin(n t / 2)/sqrt(pi)
        let basis = WeightedBasis::new(8);
        for &t in &[0.3, 1.0, 4.2] {
            let got = basis.psi(5, t) * mollify_g(t);
            let want = (-1.0f64 / t).exp() * t.powf(-1.5) * (2.5 * t).sin() / PI.sqrt();
            assert!((got - want).abs() < 1e-15);
        }
        assert_eq!(mollify_g(0.0), 0.0);
        assert_eq!(mollify_gstar(2.0 * PI), 0.0);
    }

    #[test]
    fn mollifier_vanishes_to_all_orders() {
        // successive difference quotients at the endpoint stay tiny
        let h = 1e-3;
        let mut worst: f64 = 0.0;
        for order in 1..=4 {
            let mut vals: Vec<f64> = (0..=order).map(|j| mollify_g(j as f64 * h)).collect();
            for _ in 0..order {
                vals = vals.windows(2).map(|w| (w[1] - w[0]) / h).collect();
            }
            worst = worst.max(vals[0].abs());
        }
        assert!(worst < 1e-50, "endpoint derivative {worst}");
    }

    #[test]
    fn counting_bound_explicit_values() {
        let rows = counting_check(&[1, 3]).unwrap();
        assert_eq!(rows[0].count, 2);
        assert_eq!(rows[0].bound, 8);
        assert_eq!(rows[1].count, 18);
        assert_eq!(rows[1].bound, 32);
        assert!(rows.iter().all(|r| r.holds));
    }

    #[test]
    fn counting_bound_holds_to_one_hundred() {
        let qs: Vec<u32> = (1..=100).collect();
        assert!(counting_check(&qs).unwrap().iter().all(|r| r.holds));
    }

    #[test]
    fn weighted_norm_of_mollified_basis_bounded() {
        // discrete sigma-norm of G psi_tilde_n against the norm of psi_tilde_n:
        // the fitted operator bound stays stable as the truncation grows
        let fit_c1 = |n_basis: usize| {
            let basis = WeightedBasis::new(n_basis);
            let nt = 8192;
            let k = 2.0 * PI / nt as f64;
            let mut worst = 0.0f64;
            for n in 1..=n_basis {
                // project G psi_tilde_n on the basis
                let mut norm_sq = 0.0;
                for m in 1..=4 * n_basis {
                    let mut coeff = 0.0;
                    for j in 0..=nt {
                        let w = if j == 0 || j == nt { 0.5 } else { 1.0 };
                        let t = j as f64 * k;
                        coeff += w * basis.psi_tilde(n, t) * mollify_g(t) * basis.psi(m, t) * k;
                    }
                    norm_sq += (1.0 + (0.5 * m as f64).powf(1.5)) * coeff * coeff;
                }
                // ||psi_tilde_n||_sigma = 1 by construction
                worst = worst.max(norm_sq.sqrt());
            }
            worst
        };
        let c8 = fit_c1(8);
        let c16 = fit_c1(16);
        assert!(c8.is_finite() && c16.is_finite());
        assert!((c8 / c16 - 1.0).abs() < 0.35, "C1 drifted: {c8} vs {c16}");
    }
}
