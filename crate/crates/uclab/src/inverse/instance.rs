//! Inverse-problem instances: true boundary, Dirichlet datum, noisy flux.

use crate::geometry::BoundaryCurve;
use crate::pde::{solve_heat_moving, Grid};
use crate::{Result, UclabError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

type TimeFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// One measurement setup: the unknown boundary, the datum driving the
/// solution, and the flux trace it produced (with recorded noise level).
#[derive(Clone)]
pub struct InverseInstance {
    pub s_star: BoundaryCurve,
    /// Dirichlet datum at the accessible side x = 0; f(t_lo) = 0
    pub f: TimeFn,
    /// pointwise datum floor F1(t) <= |f(t)|
    pub f1_floor: TimeFn,
    /// measured flux (forward flux of s_star plus noise), on the grid's t nodes
    pub q: Vec<f64>,
    pub noise_eps: f64,
    pub grid: Grid,
}

/// Forward flux of a candidate boundary under the instance's datum;
/// deterministic for a fixed grid.
pub fn forward_flux(s: &BoundaryCurve, f: &TimeFn, grid: &Grid) -> Result<Vec<f64>> {
    let f = f.clone();
    let (_, flux) = solve_heat_moving(s, move |t| f(t), grid)?;
    Ok(flux)
}

/// Builds an instance: solves the forward problem for `s_star`, then adds
/// Gaussian noise scaled so its discrete L2 norm equals `eps` (matching the
/// L2 measurement norm). The datum-floor invariant |f(t)| >= F1(t) is
/// checked on the grid.
pub fn make_instance(
    s_star: BoundaryCurve,
    f: TimeFn,
    f1_floor: TimeFn,
    eps: f64,
    grid: &Grid,
    seed: u64,
) -> Result<InverseInstance> {
    if eps < 0.0 {
        return Err(UclabError::invalid("instance: noise level must be nonnegative"));
    }
    if f(grid.t_lo).abs() > 1e-12 {
        return Err(UclabError::invalid("instance: datum must vanish at t_lo"));
    }
    for j in 0..=grid.nt {
        let t = grid.t(j);
        if f(t).abs() < f1_floor(t) - 1e-12 {
            return Err(UclabError::Invariant(format!(
                "instance: datum below its floor at t = {t}"
            )));
        }
    }
    let mut q = forward_flux(&s_star, &f, grid)?;
    if eps > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut noise: Vec<f64> = (0..q.len())
            .map(|_| {
                let u1: f64 = rng.gen_range(1e-12..1.0);
                let u2: f64 = rng.gen_range(0.0..1.0);
                (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
            })
            .collect();
        let k = grid.k();
        let norm: f64 = noise.iter().map(|v| v * v * k).sum::<f64>().sqrt();
        if norm > 0.0 {
            let scale = eps / norm;
            noise.iter_mut().for_each(|v| *v *= scale);
        }
        for (qv, nv) in q.iter_mut().zip(&noise) {
            *qv += nv;
        }
    }
    Ok(InverseInstance { s_star, f, f1_floor, q, noise_eps: eps, grid: grid.clone() })
}

impl InverseInstance {
    /// Discrete L2 norm of the datum over the time window.
    pub fn datum_norm(&self) -> f64 {
        let k = self.grid.k();
        (0..=self.grid.nt)
            .map(|j| (self.f)(self.grid.t(j)).powi(2) * k)
            .sum::<f64>()
            .sqrt()
    }
}
