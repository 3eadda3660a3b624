//! Operator coefficients and boundary data for the fixed-domain solvers.

use super::Grid;
use crate::{Result, UclabError};
use std::sync::Arc;

type MatFn = Arc<dyn Fn(f64, f64, f64, f64) -> [[f64; 2]; 2] + Send + Sync>;
type VecFn = Arc<dyn Fn(f64, f64, f64) -> [f64; 2] + Send + Sync>;
type ScalFn = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;

/// Coefficients of `div(kappa grad u) + b . grad u + c u - du/dt = 0`.
///
/// `kappa` is called as `(x, y, t, u)`; 1D solvers read only the `[0][0]`
/// entry and pass `y = 0`. The state argument `u` matters only when
/// `state_dependent` is set.
#[derive(Clone)]
pub struct Coefficients {
    pub kappa: MatFn,
    pub drift: Option<VecFn>,
    pub reaction: Option<ScalFn>,
    pub state_dependent: bool,
    /// ellipticity constant lambda (both bounds, as lambda and 1/lambda)
    pub lambda: f64,
    /// Lipschitz budget for the sampled modulus of kappa
    pub lambda_lip: f64,
}

impl Coefficients {
    /// Constant scalar diffusion.
    pub fn constant(kappa: f64) -> Self {
        Coefficients {
            kappa: Arc::new(move |_, _, _, _| [[kappa, 0.0], [0.0, kappa]]),
            drift: None,
            reaction: None,
            state_dependent: false,
            lambda: kappa.min(1.0 / kappa).min(1.0),
            lambda_lip: 0.0,
        }
    }

    /// Scalar diffusion `a(x)` for 1D problems with time-independent coefficients.
    pub fn scalar_1d(a: impl Fn(f64) -> f64 + Send + Sync + 'static, lambda: f64, lambda_lip: f64) -> Self {
        Coefficients {
            kappa: Arc::new(move |x, _, _, _| {
                let v = a(x);
                [[v, 0.0], [0.0, v]]
            }),
            drift: None,
            reaction: None,
            state_dependent: false,
            lambda,
            lambda_lip,
        }
    }

    /// Scalar diffusion `a(x, t, u)` with lagged state dependence.
    pub fn scalar_1d_state(
        a: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
        lambda: f64,
        lambda_lip: f64,
    ) -> Self {
        Coefficients {
            kappa: Arc::new(move |x, _, t, u| {
                let v = a(x, t, u);
                [[v, 0.0], [0.0, v]]
            }),
            drift: None,
            reaction: None,
            state_dependent: true,
            lambda,
            lambda_lip,
        }
    }

    pub fn with_drift(mut self, b: impl Fn(f64, f64, f64) -> [f64; 2] + Send + Sync + 'static) -> Self {
        self.drift = Some(Arc::new(b));
        self
    }

    pub fn with_reaction(mut self, c: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.reaction = Some(Arc::new(c));
        self
    }

    pub fn kappa_scalar(&self, x: f64, y: f64, t: f64, u: f64) -> f64 {
        (self.kappa)(x, y, t, u)[0][0]
    }

    /// Checks the ellipticity window and the sampled Lipschitz modulus of
    /// kappa on the grid nodes (at state u = 0).
    pub fn validate_on(&self, grid: &Grid, scale_r0: f64) -> Result<()> {
        let lam = self.lambda;
        if !(lam > 0.0 && lam <= 1.0) {
            return Err(UclabError::invalid("coefficients: lambda must lie in (0, 1]"));
        }
        let mut pts: Vec<(f64, f64, f64)> = Vec::new();
        let tsamp = [grid.t_lo, 0.5 * (grid.t_lo + grid.t_hi), grid.t_hi];
        for &t in &tsamp {
            for i in 0..=grid.nx {
                if grid.dim() == 1 {
                    pts.push((grid.x(i), 0.0, t));
                } else {
                    for j in 0..=grid.ny {
                        pts.push((grid.x(i), grid.y(j), t));
                    }
                }
            }
        }
        let mut prev: Option<(f64, f64, f64, [[f64; 2]; 2])> = None;
        for &(x, y, t) in &pts {
            let m = (self.kappa)(x, y, t, 0.0);
            if (m[0][1] - m[1][0]).abs() > 1e-12 {
                return Err(UclabError::Invariant("coefficients: kappa not symmetric".into()));
            }
            // eigenvalues of the symmetric 2x2 block (in 1D only m[0][0] acts)
            let (lo, hi) = if grid.dim() == 1 {
                (m[0][0], m[0][0])
            } else {
                let tr = m[0][0] + m[1][1];
                let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
                let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
                (tr / 2.0 - disc, tr / 2.0 + disc)
            };
            if lo < lam - 1e-12 || hi > 1.0 / lam + 1e-12 {
                return Err(UclabError::Invariant(format!(
                    "coefficients: ellipticity violated at ({x}, {y}, {t}): [{lo}, {hi}] vs lambda = {lam}"
                )));
            }
            if let Some((px, py, pt, pm)) = prev {
                let dist = ((x - px).powi(2) + (y - py).powi(2) + (t - pt).abs()).sqrt();
                if dist > 1e-14 {
                    let dk: f64 = (0..2)
                        .flat_map(|r| (0..2).map(move |c| (r, c)))
                        .map(|(r, c)| (m[r][c] - pm[r][c]).powi(2))
                        .sum::<f64>()
                        .sqrt();
                    if dk / dist > self.lambda_lip / scale_r0 + 1e-9 {
                        return Err(UclabError::Invariant(format!(
                            "coefficients: sampled Lipschitz modulus {} exceeds budget {}",
                            dk / dist,
                            self.lambda_lip / scale_r0
                        )));
                    }
                }
            }
            prev = Some((x, y, t, m));
        }
        Ok(())
    }
}

/// Dirichlet boundary traces. In 1D only `x_lo`/`x_hi` are used, called as
/// `(tangential coordinate, t)` with the tangential coordinate 0 in 1D.
#[derive(Clone)]
pub struct DirichletBc {
    pub x_lo: ScalFn,
    pub x_hi: ScalFn,
    pub y_lo: Option<ScalFn>,
    pub y_hi: Option<ScalFn>,
}

impl DirichletBc {
    pub fn zero() -> Self {
        let z: ScalFn = Arc::new(|_, _, _| 0.0);
        DirichletBc { x_lo: z.clone(), x_hi: z.clone(), y_lo: Some(z.clone()), y_hi: Some(z) }
    }

    /// 1D traces g_lo(t), g_hi(t).
    pub fn ends_1d(
        lo: impl Fn(f64) -> f64 + Send + Sync + 'static,
        hi: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        DirichletBc {
            x_lo: Arc::new(move |_, _, t| lo(t)),
            x_hi: Arc::new(move |_, _, t| hi(t)),
            y_lo: None,
            y_hi: None,
        }
    }

    /// 2D traces: each closure receives the full (x, y, t).
    pub fn sides_2d(
        x_lo: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
        x_hi: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
        y_lo: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
        y_hi: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        DirichletBc {
            x_lo: Arc::new(x_lo),
            x_hi: Arc::new(x_hi),
            y_lo: Some(Arc::new(y_lo)),
            y_hi: Some(Arc::new(y_hi)),
        }
    }
}

/// Solver knobs.
#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Fixed-point iteration for state-dependent kappa instead of one lagged
    /// evaluation; iterates until the update falls below `fixed_point_tol`.
    pub fixed_point: bool,
    pub fixed_point_tol: f64,
    pub fixed_point_max_iter: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { fixed_point: false, fixed_point_tol: 1e-10, fixed_point_max_iter: 50 }
    }
}
