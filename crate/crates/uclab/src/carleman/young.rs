//! The auxiliary inequality `y^mu e^-y <= C (eps + (log 1/eps)^mu e^-y)`.

use crate::{Result, UclabError};

/// Smallest grid constant and where it is attained.
#[derive(Debug, Clone, Copy)]
pub struct YoungReport {
    pub mu: f64,
    pub c: f64,
    pub argmax_y: f64,
    pub argmax_eps: f64,
}

/// Finds the smallest C(mu) making the inequality hold on the grid.
pub fn young_log_check(mu: f64, y_grid: &[f64], eps_grid: &[f64]) -> Result<YoungReport> {
    if mu <= 0.0 {
        return Err(UclabError::invalid("young_log_check: mu must be positive"));
    }
    if y_grid.iter().any(|&y| y < 0.0) {
        return Err(UclabError::invalid("young_log_check: y must be nonnegative"));
    }
    if eps_grid.iter().any(|&e| !(0.0 < e && e < 1.0)) {
        return Err(UclabError::invalid("young_log_check: eps must lie in (0, 1)"));
    }
    let mut best = YoungReport { mu, c: 0.0, argmax_y: 0.0, argmax_eps: 0.0 };
    for &eps in eps_grid {
        let log_term = (1.0 / eps).ln().powf(mu);
        for &y in y_grid {
            let lhs = y.powf(mu) * (-y).exp();
            let rhs_unit = eps + log_term * (-y).exp();
            let c = lhs / rhs_unit;
            if c > best.c {
                best = YoungReport { mu, c, argmax_y: y, argmax_eps: eps };
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grids(n: usize) -> (Vec<f64>, Vec<f64>) {
        let y: Vec<f64> = (0..n).map(|i| 60.0 * i as f64 / (n - 1) as f64).collect();
        let eps: Vec<f64> = (1..n)
            .map(|i| 10f64.powf(-8.0 * i as f64 / n as f64))
            .collect();
        (y, eps)
    }

    #[test]
    fn zero_y_contributes_nothing() {
        let rep = young_log_check(1.0, &[0.0], &[0.5]).unwrap();
        assert_eq!(rep.c, 0.0);
    }

    #[test]
    fn mu_one_pointwise_maximum() {
        // the proof's maximum: y - eps e^y attains log(1/eps) - 1, so the
        // pointwise bound y - eps e^y < log(1/eps) holds strictly
        let (y, eps) = grids(400);
        for &e in &eps {
            for &yy in &y {
                assert!(yy - e * yy.exp() < (1.0 / e).ln());
            }
        }
        // and the fitted C for mu = 1 is at most 1 + o(1) on the grid
        let rep = young_log_check(1.0, &y, &eps).unwrap();
        assert!(rep.c <= 1.0 + 1e-9, "C(1) = {}", rep.c);
    }

    #[test]
    fn fitted_c_stable_under_refinement() {
        let (y1, e1) = grids(300);
        let (y4, e4) = grids(1200);
        let c1 = young_log_check(1.5, &y1, &e1).unwrap().c;
        let c4 = young_log_check(1.5, &y4, &e4).unwrap().c;
        assert!((c1 / c4 - 1.0).abs() < 0.05, "c1 {c1} c4 {c4}");
        assert!(c4.is_finite() && c4 > 0.0);
    }
}
