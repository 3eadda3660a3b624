//! Central table of tolerance and calibration defaults.
//!
//! Every threshold used by the acceptance checks is pinned here; experiment
//! configs may override individual values per run, and the CLI records the
//! table in effect in each run manifest.

use serde::{Deserialize, Serialize};

/// Solver / check tolerances, one table for the whole crate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// L∞ error allowed for the separable exact solution at h = k^(1/2) = 1/256.
    pub solver_linf: f64,
    /// Minimal error-reduction factor on grid halving (second-order contract).
    pub self_convergence_ratio: f64,
    /// Relative trace error |W(x,0) - u(x,1)| for the elliptic companion.
    pub companion_trace_rel: f64,
    /// Central-difference bound on the companion Neumann trace at y = 0.
    pub companion_neumann: f64,
    /// Relative elliptic residual allowed for the companion field.
    pub companion_residual_rel: f64,
    /// Spread allowed for the fitted three-sphere constant across degrees.
    pub three_sphere_spread: f64,
    /// Factor allowed for fitted two-sphere constants over an r-decade.
    pub two_sphere_stability_factor: f64,
    /// Pointwise slack for the sigma-table bounds.
    pub sigma_bounds: f64,
    /// Residual allowed for the weight ODE.
    pub sigma_ode_residual: f64,
    /// Relative drift of the fitted Young-inequality constant under refinement.
    pub young_refine_rel: f64,
    /// Max/min ratio allowed for fitted Carleman constants across a suite.
    pub carleman_spread: f64,
    /// Scale-invariance slack for the Carleman audit under u -> lambda*u.
    pub carleman_scale_invariance: f64,
    /// Relative L2 mismatch allowed between numeric flux and the Fourier oracle.
    pub dtn_oracle_rel: f64,
    /// Allowed relative drift of the fitted decay rate under grid refinement.
    pub decay_fit_drift: f64,
    /// Eigenvector orthonormality residual.
    pub eigen_orthonormality: f64,
    /// Tail-energy threshold for eigen/Fourier truncations.
    pub truncation_tail: f64,
    /// Certified relative tail for frequency-grid truncation.
    pub frequency_tail: f64,
    /// Exact-recovery multiple of the forward-solver tolerance.
    pub exact_recovery_factor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            solver_linf: 1e-5,
            self_convergence_ratio: 3.5,
            companion_trace_rel: 1e-4,
            companion_neumann: 1e-4,
            companion_residual_rel: 1e-3,
            three_sphere_spread: 0.20,
            two_sphere_stability_factor: 2.0,
            sigma_bounds: 1e-10,
            sigma_ode_residual: 1e-8,
            young_refine_rel: 0.05,
            carleman_spread: 1e3,
            carleman_scale_invariance: 1e-12,
            dtn_oracle_rel: 1e-3,
            decay_fit_drift: 0.30,
            eigen_orthonormality: 1e-10,
            truncation_tail: 1e-10,
            frequency_tail: 1e-12,
            exact_recovery_factor: 10.0,
        }
    }
}

/// Calibration constants fitted once on reference suites and then frozen.
///
/// These realize constants the statements leave unspecified ("C depends on
/// lambda and Lambda only"); they are reported alongside every check that
/// uses them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    /// Smallness constants of the two-sphere inequalities (default 0.25,
    /// shrunk automatically when a precondition fails).
    pub eta1: f64,
    pub eta2: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    /// Memory-estimate constant of the lower bound and time horizon.
    pub memory_c: f64,
    /// Chain-iteration constant entering theta_star = 1/(c0 * log(4/eta1)).
    pub chain_c0: f64,
    /// Front constant of the smallness-propagation bound.
    pub propagation_c: f64,
    /// Discreteness threshold scale for bump families, by (m, b).
    pub mandache_eps0: f64,
}

impl Default for Calibration {
    fn default() -> Self {
        Self {
            eta1: 0.25,
            eta2: 0.25,
            gamma1: 0.25,
            gamma2: 0.25,
            memory_c: 40.0,
            chain_c0: 1.0,
            propagation_c: 12.0,
            mandache_eps0: 0.2,
        }
    }
}
