//! Time-varying 1D boundary graphs s(t), the unknown of the inverse problem.
//!
//! A curve lives in the class of functions on [t_lo, t_hi] with
//! `1 <= s <= 1 + delta`, `s(t_lo) = s(t_hi) = 1` and C^m norm at most `b`.
//! Membership is checked on a grid: the C^m norm is estimated by centered
//! finite differences, since no computational test is prescribed for the
//! continuum class.

use crate::{Result, UclabError};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

type TimeFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Sample-backed or closed-form curve values.
#[derive(Clone)]
pub enum CurveForm {
    /// Uniform samples on [t_lo, t_hi], endpoints included.
    Samples(Vec<f64>),
    /// Smooth parametric form with exact derivative.
    Analytic { s: TimeFn, ds: TimeFn },
}

impl std::fmt::Debug for CurveForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CurveForm::Samples(v) => write!(f, "Samples({} pts)", v.len()),
            CurveForm::Analytic { .. } => write!(f, "Analytic"),
        }
    }
}

/// A time-varying boundary x = s(t) with its smoothness-class metadata.
#[derive(Clone, Debug)]
pub struct BoundaryCurve {
    pub t_lo: f64,
    pub t_hi: f64,
    /// smoothness order of the class
    pub m: usize,
    /// C^m norm budget
    pub b: f64,
    /// amplitude budget: 1 <= s <= 1 + delta
    pub delta: f64,
    pub form: CurveForm,
    /// grid used for sampling and invariant checks (number of intervals)
    pub grid_n: usize,
}

/// Serialized descriptor (samples only; closed forms are sampled on export).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveDescriptor {
    pub m: usize,
    pub b: f64,
    pub delta: f64,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

impl BoundaryCurve {
    /// The reference boundary s0 = 1.
    pub fn constant_one(t_lo: f64, t_hi: f64, m: usize, b: f64, grid_n: usize) -> Self {
        BoundaryCurve {
            t_lo,
            t_hi,
            m,
            b,
            delta: 0.0,
            form: CurveForm::Analytic { s: Arc::new(|_| 1.0), ds: Arc::new(|_| 0.0) },
            grid_n,
        }
    }

    pub fn from_samples(
        t_lo: f64,
        t_hi: f64,
        m: usize,
        b: f64,
        delta: f64,
        values: Vec<f64>,
    ) -> Result<Self> {
        if values.len() < 2 {
            return Err(UclabError::invalid("curve: need at least 2 samples"));
        }
        let grid_n = values.len() - 1;
        let c = BoundaryCurve { t_lo, t_hi, m, b, delta, form: CurveForm::Samples(values), grid_n };
        c.validate()?;
        Ok(c)
    }

    pub fn from_analytic(
        t_lo: f64,
        t_hi: f64,
        m: usize,
        b: f64,
        delta: f64,
        s: impl Fn(f64) -> f64 + Send + Sync + 'static,
        ds: impl Fn(f64) -> f64 + Send + Sync + 'static,
        grid_n: usize,
    ) -> Result<Self> {
        let c = BoundaryCurve {
            t_lo,
            t_hi,
            m,
            b,
            delta,
            form: CurveForm::Analytic { s: Arc::new(s), ds: Arc::new(ds) },
            grid_n,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn span(&self) -> f64 {
        self.t_hi - self.t_lo
    }

    /// Value at an arbitrary time; samples are interpolated with a cubic
    /// (Catmull-Rom) stencil so the moving-domain solver keeps second order.
    pub fn eval(&self, t: f64) -> f64 {
        match &self.form {
            CurveForm::Analytic { s, .. } => s(t),
            CurveForm::Samples(v) => interp_cubic(v, self.t_lo, self.t_hi, t),
        }
    }

    /// Time derivative s'(t).
    pub fn deriv(&self, t: f64) -> f64 {
        match &self.form {
            CurveForm::Analytic { ds, .. } => ds(t),
            CurveForm::Samples(v) => {
                let h = self.span() / (v.len() - 1) as f64;
                (interp_cubic(v, self.t_lo, self.t_hi, t + 0.5 * h)
                    - interp_cubic(v, self.t_lo, self.t_hi, t - 0.5 * h))
                    / h
            }
        }
    }

    /// Uniform samples on the curve's own grid.
    pub fn samples(&self) -> Vec<f64> {
        self.samples_n(self.grid_n)
    }

    pub fn samples_n(&self, n: usize) -> Vec<f64> {
        (0..=n)
            .map(|i| self.eval(self.t_lo + self.span() * i as f64 / n as f64))
            .collect()
    }

    /// Checks the class invariants on the grid: amplitude window, unit
    /// endpoints, and the finite-difference C^m estimate against `b`.
    pub fn validate(&self) -> Result<()> {
        if !(self.t_hi > self.t_lo) {
            return Err(UclabError::invalid("curve: empty time interval"));
        }
        if self.m == 0 {
            return Err(UclabError::invalid("curve: smoothness order m must be positive"));
        }
        let v = self.samples();
        let slack = 1e-9 * (1.0 + self.delta);
        for (i, &s) in v.iter().enumerate() {
            if s < 1.0 - slack || s > 1.0 + self.delta + slack {
                return Err(UclabError::Invariant(format!(
                    "curve: sample {i} = {s} outside [1, 1 + {}]",
                    self.delta
                )));
            }
        }
        if (v[0] - 1.0).abs() > slack || (v[v.len() - 1] - 1.0).abs() > slack {
            return Err(UclabError::Invariant("curve: endpoints must equal 1".into()));
        }
        let est = self.cm_norm_estimate();
        if est > self.b * (1.0 + 1e-9) {
            return Err(UclabError::Invariant(format!(
                "curve: C^{} estimate {est} exceeds budget {}",
                self.m, self.b
            )));
        }
        Ok(())
    }

    /// max over 0 <= j <= m of the sup of the j-th centered difference
    /// (interior stencils only).
    pub fn cm_norm_estimate(&self) -> f64 {
        let v = self.samples();
        let n = v.len();
        let h = self.span() / (n - 1) as f64;
        let mut level = v;
        let mut worst = level.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        for _ in 1..=self.m {
            // centered first difference of the current level
            let mut next = Vec::with_capacity(level.len().saturating_sub(2));
            for i in 1..level.len() - 1 {
                next.push((level[i + 1] - level[i - 1]) / (2.0 * h));
            }
            if next.is_empty() {
                break;
            }
            worst = worst.max(next.iter().fold(0.0f64, |m, x| m.max(x.abs())));
            level = next;
        }
        worst
    }

    pub fn descriptor(&self) -> CurveDescriptor {
        let grid = (0..=self.grid_n)
            .map(|i| self.t_lo + self.span() * i as f64 / self.grid_n as f64)
            .collect();
        CurveDescriptor {
            m: self.m,
            b: self.b,
            delta: self.delta,
            grid,
            values: self.samples(),
        }
    }

    /// CSV rows `t,s`.
    pub fn write_csv<W: std::io::Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "t,s")?;
        let vals = self.samples();
        for (i, s) in vals.iter().enumerate() {
            let t = self.t_lo + self.span() * i as f64 / self.grid_n as f64;
            writeln!(w, "{t},{s}")?;
        }
        Ok(())
    }
}

fn interp_cubic(v: &[f64], t_lo: f64, t_hi: f64, t: f64) -> f64 {
    let n = v.len() - 1;
    let h = (t_hi - t_lo) / n as f64;
    let pos = ((t - t_lo) / h).clamp(0.0, n as f64);
    let i = (pos.floor() as usize).min(n.saturating_sub(1));
    let s = pos - i as f64;
    let at = |j: isize| {
        let idx = (i as isize + j).clamp(0, n as isize) as usize;
        v[idx]
    };
    let (p0, p1, p2, p3) = (at(-1), at(0), at(1), at(2));
    // Catmull-Rom
    0.5 * ((2.0 * p1)
        + (-p0 + p2) * s
        + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * s * s
        + (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * s * s * s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_curve_is_valid() {
        let c = BoundaryCurve::constant_one(0.0, 1.0, 2, 10.0, 64);
        assert!(c.validate().is_ok());
        assert_eq!(c.eval(0.5), 1.0);
    }

    #[test]
    fn amplitude_violation_rejected() {
        let vals = vec![1.0, 1.3, 1.0];
        assert!(BoundaryCurve::from_samples(0.0, 1.0, 1, 10.0, 0.1, vals).is_err());
    }

    #[test]
    fn endpoint_violation_rejected() {
        let vals = vec![1.05, 1.05, 1.0];
        assert!(BoundaryCurve::from_samples(0.0, 1.0, 1, 10.0, 0.1, vals).is_err());
    }

    #[test]
    fn cm_budget_enforced() {
        // steep sawtooth: first derivative ~ 12.8 > b = 2
        let n = 64;
        let vals: Vec<f64> = (0..=n)
            .map(|i| {
                let t = i as f64 / n as f64;
                1.0 + 0.1 * (1.0 - (2.0 * t - 1.0).abs()).powi(1)
            })
            .collect();
        let res = BoundaryCurve::from_samples(0.0, 1.0, 1, 0.15, 0.1, vals);
        assert!(res.is_err());
    }

    #[test]
    fn cubic_interpolation_matches_smooth_samples() {
        let n = 256;
        let f = |t: f64| 1.0 + 0.05 * (std::f64::consts::PI * t).sin().powi(2);
        let vals: Vec<f64> = (0..=n).map(|i| f(i as f64 / n as f64)).collect();
        let c = BoundaryCurve::from_samples(0.0, 1.0, 2, 10.0, 0.05, vals).unwrap();
        for &t in &[0.13, 0.377, 0.5, 0.861] {
            assert!((c.eval(t) - f(t)).abs() < 1e-6);
        }
    }
}
