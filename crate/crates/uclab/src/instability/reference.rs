//! Analytic Fourier reference for the unit strip: the transformed solution
//! and its flux for the mollified-sine data, evaluated by substituted
//! quadrature so the square-root branch points cost no accuracy.

use crate::par::par_map_indexed;
use nalgebra::Complex;
use std::f64::consts::PI;

type C64 = Complex<f64>;

/// Closed-form transform of `y_n(t) = e^(-1/t) t^(-3/2) sin(n t / 2)/sqrt(pi)`:
/// `y_hat(xi) = (e^(-2 sqrt(i(xi - n/2))) - e^(-2 sqrt(i(xi + n/2)))) / (2 i)`
/// with the principal square root.
pub fn y_hat(n: usize, xi: f64) -> C64 {
    let half_n = 0.5 * n as f64;
    (branch(xi - half_n) - branch(xi + half_n)) / C64::new(0.0, 2.0)
}

/// e^(-2 sqrt(i w)) with sqrt(i w) = sqrt(|w|/2) (1 + i sign w).
fn branch(w: f64) -> C64 {
    let r = (0.5 * w.abs()).sqrt();
    (C64::new(-2.0 * r, -2.0 * r * w.signum())).exp()
}

/// The principal root of sigma^2 = i xi: sigma = sqrt(|xi|/2) (1 + i sign xi).
/// (The rotated root sqrt(|xi|/2)(i - sign xi) solves sigma^2 = -i xi instead
/// and corrupts the flux kernel, as the kernel tests show.)
fn sigma_of(xi: f64) -> C64 {
    let r = (0.5 * xi.abs()).sqrt();
    C64::new(r, r * xi.signum())
}

/// Transformed solution on the strip: `u_hat(x, xi) = y_hat(xi) sinh(sigma (1 - x)) / sinh(sigma)`
/// (datum y_hat at x = 0, zero at x = 1); the xi = 0 limit is the linear profile.
pub fn reference_u_hat(n: usize, x: f64, xi: f64) -> C64 {
    let yh = y_hat(n, xi);
    if xi.abs() < 1e-12 {
        return yh * (1.0 - x);
    }
    let s = sigma_of(xi);
    // sinh ratio without overflow: factor e^(Re s) cancels between the two
    let num = (s * (1.0 - x)).sinh();
    let den = s.sinh();
    yh * num / den
}

/// sigma coth(sigma), the flux multiplier at x = 0; -> 1 as xi -> 0.
fn flux_kernel(xi: f64) -> C64 {
    if xi.abs() < 1e-12 {
        return C64::new(1.0, 0.0);
    }
    let s = sigma_of(xi);
    s * s.cosh() / s.sinh()
}

/// Flux `-du/dx(0, t)` of the strip solution with datum `w_n y_n` at x = 0,
/// by inverse transform of `w_n y_hat(xi) sigma coth(sigma)`. The quadrature
/// substitutes `xi = +-n/2 + s|s|` around each branch point, which smooths
/// the sqrt kinks; `s_max` and `ds` control the window (the integrand decays
/// like e^(-sqrt(2)|s|)).
pub fn reference_flux(n: usize, weight: f64, t_grid: &[f64], s_max: f64, ds: f64) -> Vec<f64> {
    let half_n = 0.5 * n as f64;
    let n_s = (2.0 * s_max / ds).round() as usize;

    // precompute the two substituted integrand families on the s grid
    // term1 centered at +n/2 carries e^(-2 sqrt(i(xi - n/2))) / (2i),
    // term2 centered at -n/2 carries -e^(-2 sqrt(i(xi + n/2))) / (2i)
    let mut nodes = Vec::with_capacity(2 * (n_s + 1));
    for (center, sign) in [(half_n, 1.0f64), (-half_n, -1.0)] {
        for idx in 0..=n_s {
            let s = -s_max + idx as f64 * ds;
            let xi = center + s * s.abs();
            let jac = 2.0 * s.abs().max(1e-30);
            let amp = branch(xi - center) / C64::new(0.0, 2.0) * sign;
            let trapz = if idx == 0 || idx == n_s { 0.5 } else { 1.0 };
            nodes.push((xi, amp * flux_kernel(xi) * (jac * trapz * ds)));
        }
    }

    par_map_indexed(t_grid.len(), |ti| {
        let t = t_grid[ti];
        let mut acc = C64::new(0.0, 0.0);
        for &(xi, w) in &nodes {
            acc += w * C64::new(0.0, xi * t).exp();
        }
        weight * acc.re / (2.0 * PI)
    })
}
