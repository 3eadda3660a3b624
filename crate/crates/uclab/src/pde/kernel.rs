//! Exact constant-coefficient heat kernel.

use std::f64::consts::PI;

/// Fundamental solution of the heat equation in `dim` space dimensions:
/// `(4 pi (s - tau))^(-dim/2) * exp(-|x - y|^2 / (4 (s - tau)))`,
/// and 0 whenever `s <= tau` (the kernel vanishes backward in time).
pub fn heat_kernel(x: &[f64], s: f64, y: &[f64], tau: f64, dim: usize) -> f64 {
    debug_assert_eq!(x.len(), dim);
    debug_assert_eq!(y.len(), dim);
    if s <= tau {
        return 0.0;
    }
    let dt = s - tau;
    let r2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
    (4.0 * PI * dt).powf(-(dim as f64) / 2.0) * (-r2 / (4.0 * dt)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_at_quarter_pi() {
        // x = y, n = 1, s - tau = 1/(4 pi) gives exactly 1
        let v = heat_kernel(&[0.3], 1.0 / (4.0 * PI), &[0.3], 0.0, 1);
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn vanishes_backward_in_time() {
        assert_eq!(heat_kernel(&[0.0], 0.5, &[1.0], 1.0, 1), 0.0);
        assert_eq!(heat_kernel(&[0.0, 0.0], 1.0, &[1.0, 0.0], 1.0, 2), 0.0);
    }

    #[test]
    fn gaussian_bounds_hold_with_c_one() {
        // Up to the (4 pi)^(-1/2) normalization the exact kernel saturates its
        // own two-sided Gaussian bounds, so they hold with C = 1.
        for &(x, s, y, tau) in &[(0.2, 0.7, -0.1, 0.1), (1.5, 2.0, 0.0, 0.5)] {
            let v = heat_kernel(&[x], s, &[y], tau, 1);
            let dt: f64 = s - tau;
            let gauss = dt.powf(-0.5) * (-(x - y) * (x - y) / (4.0 * dt)).exp();
            assert!((v / gauss - (4.0 * PI).powf(-0.5)).abs() < 1e-12);
        }
    }
}
