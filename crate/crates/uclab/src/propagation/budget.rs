//! Stability-budget calculators: the exterior-energy budget, the modified
//! and Hausdorff distance bounds, and the final logarithmic moduli.
//!
//! The double-exponential factor b(t) underflows f64 for realistic
//! calibrations, so every quantity is carried in the log domain alongside its
//! (possibly under/overflowed) natural value.

use crate::{Result, UclabError};
use serde::Serialize;

/// Calibration constants of the budget formulas.
#[derive(Debug, Clone)]
pub struct BudgetCalib {
    pub c: f64,
    pub h: f64,
    pub m: f64,
    pub r0: f64,
    /// space dimension of the bodies
    pub n: usize,
    /// strictly increasing datum floor F1(t) with F1(0) = 0
    pub f1: fn(f64) -> f64,
}

impl Default for BudgetCalib {
    fn default() -> Self {
        BudgetCalib { c: 10.0, h: 1.0, m: 1.0, r0: 1.0, n: 1, f1: |t| t }
    }
}

/// Budget values at (sigma, t), in both natural and log scale.
#[derive(Debug, Clone, Serialize)]
pub struct StabilityBudget {
    pub sigma: f64,
    pub t: f64,
    /// log b(t) (nonpositive); b itself may underflow to 0
    pub log_b: f64,
    pub b: f64,
    /// log of the modified-distance bound
    pub log_dm_bound: f64,
    pub dm_bound: f64,
    /// log of the Hausdorff-distance bound
    pub log_d_bound: f64,
    pub d_bound: f64,
    /// final logarithmic modulus with the slow (log log) rate
    pub log_d_final_slow: f64,
    /// final logarithmic modulus with the improved |log eps|^(-1/C) rate
    pub log_d_final_improved: f64,
}

/// Evaluates the budget formulas at `sigma in (0, M H^2)` and `t in (0, T]`.
/// `eps` feeds the final moduli (the measurement error the budget descends
/// from).
pub fn stability_budget(
    sigma: f64,
    t: f64,
    eps: f64,
    calib: &BudgetCalib,
) -> Result<StabilityBudget> {
    if !(t > 0.0) {
        return Err(UclabError::invalid("budget: t must be positive"));
    }
    let mh2 = calib.m * calib.h * calib.h;
    if !(sigma > 0.0 && sigma < mh2) {
        return Err(UclabError::invalid(format!(
            "budget: sigma must lie in (0, M H^2 = {mh2})"
        )));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(UclabError::invalid("budget: eps must lie in (0, 1)"));
    }
    let n = calib.n as f64;
    let (c, h, r0) = (calib.c, calib.h, calib.r0);
    let f1 = (calib.f1)(t).max(1e-300);

    // b(t) = exp(-e^{C R0^n / min(t^{n/2}, R0^n)} (F1/H)^{-C R0 / min(sqrt t, R0)})
    let min_n = t.powf(n / 2.0).min(r0.powf(n));
    let min_half = t.sqrt().min(r0);
    let log_b = -((c * r0.powf(n) / min_n).exp() * (f1 / h).powf(-c * r0 / min_half));
    let b = log_b.exp();

    // d_m(t) <= C R0^(n+1) / (b(t) min(t^{n/2}, R0^n)) (sigma/(M H^2))^(1/log(C/b))
    let exponent = 1.0 / (c.ln() - log_b);
    let log_dm_bound =
        c.ln() + (n + 1.0) * r0.ln() - log_b - min_n.ln() + exponent * (sigma / mh2).ln();
    let min_n1 = t.powf((n + 1.0) / 2.0).min(r0.powf(n + 1.0));
    let log_d_bound =
        c.ln() + (n + 2.0) * r0.ln() - log_b - min_n1.ln() + exponent * (sigma / mh2).ln();

    // final moduli: sigma replaced by M H^2 omega(eps/H) with the slow
    // omega(s) <= C (log |log s|)^(-1/n) and the improved C |log s|^(-1/C)
    let s = (eps / h).min(0.99e-0).max(1e-300);
    let omega_slow = c * (s.ln().abs().ln().max(1e-300)).powf(-1.0 / n);
    let omega_improved = c * s.ln().abs().powf(-1.0 / c);
    let final_of = |omega: f64| -> f64 {
        let sig = (calib.m * h * h * omega).min(mh2 * (1.0 - 1e-12));
        c.ln() + (n + 2.0) * r0.ln() - log_b - min_n1.ln() + exponent * (sig / mh2).ln()
    };

    Ok(StabilityBudget {
        sigma,
        t,
        log_b,
        b,
        log_dm_bound,
        dm_bound: log_dm_bound.exp(),
        log_d_bound,
        d_bound: log_d_bound.exp(),
        log_d_final_slow: final_of(omega_slow),
        log_d_final_improved: final_of(omega_improved),
    })
}

/// Log of the interior lower bound: for z at distance 2 rho_bar inside the
/// domain, `int_{B_rho(z)} u^2 >= H^2 rho^n exp(-e^{...} (F1/H)^{+...})`.
pub fn interior_lower_bound_log(t: f64, rho_bar: f64, calib: &BudgetCalib) -> f64 {
    let n = calib.n as f64;
    let (c, h, r0) = (calib.c, calib.h, calib.r0);
    let f1 = ((calib.f1)(t)).max(1e-300);
    let min_n = t.powf(n / 2.0).min(rho_bar.powf(n));
    let min_half = t.sqrt().min(rho_bar);
    2.0 * h.ln() + n * rho_bar.ln()
        - (c * r0.powf(n) / min_n).exp() * (f1 / h).powf(c * r0 / min_half)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_vanish_with_sigma() {
        let calib = BudgetCalib::default();
        let mut prev = f64::NEG_INFINITY;
        for &sigma in &[1e-12, 1e-9, 1e-6, 1e-3] {
            let b = stability_budget(sigma, 1.0, 1e-3, &calib).unwrap();
            assert!(b.log_dm_bound > prev, "not monotone at sigma = {sigma}");
            prev = b.log_dm_bound;
        }
    }

    #[test]
    fn halving_sigma_strictly_decreases_bound() {
        // a mild calibration keeps the decrement representable in f64
        let calib = BudgetCalib { c: 2.0, ..Default::default() };
        let b1 = stability_budget(1e-6, 0.5, 1e-3, &calib).unwrap();
        let b2 = stability_budget(5e-7, 0.5, 1e-3, &calib).unwrap();
        assert!(b2.log_dm_bound < b1.log_dm_bound);
        assert!(b2.log_d_bound < b1.log_d_bound);
    }

    #[test]
    fn calibrated_value_matches_log_domain_oracle() {
        // (C = 10, H = 1, F1(t) = t) at t = 1, sigma = 1e-6: the log-domain
        // arithmetic spelled out term by term is the oracle
        let calib = BudgetCalib::default();
        let b = stability_budget(1e-6, 1.0, 1e-3, &calib).unwrap();
        let log_b = -(10.0f64.exp() * 1.0);
        assert!((b.log_b - log_b).abs() < 1e-9 * log_b.abs());
        let exponent = 1.0 / (10.0f64.ln() - log_b);
        let want_dm = 10.0f64.ln() - log_b - 0.0 + exponent * (1e-6f64).ln();
        assert!(
            (b.log_dm_bound - want_dm).abs() < 1e-9 * want_dm.abs(),
            "{} vs {want_dm}",
            b.log_dm_bound
        );
        // natural-scale b underflows to zero but its log is finite
        assert_eq!(b.b, 0.0);
        assert!(b.log_b.is_finite());
    }

    #[test]
    fn invariants_of_b() {
        let calib = BudgetCalib::default();
        for &t in &[0.1, 0.5, 1.0] {
            let b = stability_budget(1e-6, t, 1e-4, &calib).unwrap();
            assert!(b.log_b <= 0.0, "b(t) must lie in (0, 1]");
        }
    }

    #[test]
    fn sigma_cap_enforced() {
        let calib = BudgetCalib::default();
        assert!(stability_budget(2.0, 1.0, 1e-3, &calib).is_err());
    }

    #[test]
    fn improved_modulus_is_tighter() {
        let calib = BudgetCalib::default();
        let b = stability_budget(1e-6, 1.0, 1e-8, &calib).unwrap();
        assert!(b.log_d_final_improved <= b.log_d_final_slow);
    }
}
