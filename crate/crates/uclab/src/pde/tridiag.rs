//! Thomas algorithm for tridiagonal systems.

use crate::{Result, UclabError};

/// Solves a tridiagonal system in place. `lower[0]` and `upper[n-1]` are unused.
/// Fails on vanishing pivots (degenerate diffusion).
pub fn solve(
    lower: &[f64],
    diag: &[f64],
    upper: &[f64],
    rhs: &mut [f64],
    scratch: &mut Vec<f64>,
) -> Result<()> {
    let n = diag.len();
    debug_assert_eq!(lower.len(), n);
    debug_assert_eq!(upper.len(), n);
    debug_assert_eq!(rhs.len(), n);
    scratch.clear();
    scratch.resize(n, 0.0);

    let mut beta = diag[0];
    if beta.abs() < 1e-300 {
        return Err(UclabError::numerical("tridiagonal solve: zero pivot"));
    }
    rhs[0] /= beta;
    for i in 1..n {
        scratch[i] = upper[i - 1] / beta;
        beta = diag[i] - lower[i] * scratch[i];
        if beta.abs() < 1e-300 {
            return Err(UclabError::numerical("tridiagonal solve: zero pivot"));
        }
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / beta;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= scratch[i + 1] * rhs[i + 1];
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_dense_solution() {
        let n = 6;
        let lower = vec![-1.0; n];
        let diag = vec![2.5; n];
        let upper = vec![-1.2; n];
        let x_true: Vec<f64> = (0..n).map(|i| (i as f64 * 0.7).sin() + 0.3).collect();
        let mut rhs = vec![0.0; n];
        for i in 0..n {
            rhs[i] = diag[i] * x_true[i];
            if i > 0 {
                rhs[i] += lower[i] * x_true[i - 1];
            }
            if i + 1 < n {
                rhs[i] += upper[i] * x_true[i + 1];
            }
        }
        let mut scratch = Vec::new();
        solve(&lower, &diag, &upper, &mut rhs, &mut scratch).unwrap();
        for i in 0..n {
            assert!((rhs[i] - x_true[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_pivot_errors() {
        let lower = vec![0.0, 1.0];
        let diag = vec![0.0, 1.0];
        let upper = vec![1.0, 0.0];
        let mut rhs = vec![1.0, 1.0];
        let mut scratch = Vec::new();
        assert!(solve(&lower, &diag, &upper, &mut rhs, &mut scratch).is_err());
    }
}
