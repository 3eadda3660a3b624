//! The geometric ball chain inside a space-time cone.

use crate::{Result, UclabError};

/// A truncated cone C(x0, zeta, alpha, R) with its parabolic slab
/// S(X0, zeta, alpha, delta, R) = { (x,t) : x in C, -(delta (x-x0).zeta)^2 < t - t0 <= 0 },
/// plus the Hoelder data budget of the solutions it will carry.
#[derive(Debug, Clone)]
pub struct ConeSpec {
    pub vertex_x: Vec<f64>,
    pub vertex_t: f64,
    /// unit axis direction
    pub axis: Vec<f64>,
    /// half-aperture, below pi/2
    pub alpha: f64,
    /// time-thickness parameter, at most 1
    pub delta: f64,
    pub radius: f64,
    /// Hoelder exponent gamma <= 1
    pub gamma: f64,
    /// Hoelder budget H of (sup |u| + R^gamma [u]_gamma)
    pub h_budget: f64,
}

impl ConeSpec {
    pub fn validate(&self) -> Result<()> {
        let norm: f64 = self.axis.iter().map(|v| v * v).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(UclabError::invalid("cone: axis must be a unit vector"));
        }
        if !(self.alpha > 0.0 && self.alpha < std::f64::consts::FRAC_PI_2) {
            return Err(UclabError::invalid("cone: half-aperture must lie in (0, pi/2)"));
        }
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return Err(UclabError::invalid("cone: delta must lie in (0, 1]"));
        }
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(UclabError::invalid("cone: gamma must lie in (0, 1]"));
        }
        if self.radius <= 0.0 || self.h_budget <= 0.0 {
            return Err(UclabError::invalid("cone: radius and budget must be positive"));
        }
        Ok(())
    }

    /// Membership of a spatial point in the open cone with aperture `ap`.
    pub fn contains_spatial(&self, x: &[f64], ap: f64) -> bool {
        let d: Vec<f64> = x.iter().zip(&self.vertex_x).map(|(a, b)| a - b).collect();
        let len: f64 = d.iter().map(|v| v * v).sum::<f64>().sqrt();
        if len == 0.0 || len >= self.radius + 1e-12 {
            return false;
        }
        let along: f64 = d.iter().zip(&self.axis).map(|(a, b)| a * b).sum();
        along / len > ap.cos() - 1e-12
    }

    /// Membership of (x, t) in the slab.
    pub fn contains_spacetime(&self, x: &[f64], t: f64) -> bool {
        if !self.contains_spatial(x, self.alpha) {
            return false;
        }
        let d: Vec<f64> = x.iter().zip(&self.vertex_x).map(|(a, b)| a - b).collect();
        let along: f64 = d.iter().zip(&self.axis).map(|(a, b)| a * b).sum();
        let depth = (self.delta * along).powi(2);
        t - self.vertex_t <= 1e-15 && t - self.vertex_t > -depth - 1e-15
    }
}

/// The derived chain: centers w_k = x0 + mu_k zeta, radii rho_k, gaps d_k,
/// contraction ratio a, and the stopping index for a target gap r.
#[derive(Debug, Clone)]
pub struct ChainPlan {
    pub alpha1: f64,
    pub ratio_a: f64,
    pub theta_star_log4_eta1: f64,
    pub mu: Vec<f64>,
    pub rho: Vec<f64>,
    pub gap: Vec<f64>,
    pub k_bar: usize,
    pub eta1: f64,
}

impl ChainPlan {
    pub fn center(&self, cone: &ConeSpec, k: usize) -> Vec<f64> {
        cone.vertex_x
            .iter()
            .zip(&cone.axis)
            .map(|(v, a)| v + self.mu[k] * a)
            .collect()
    }
}

/// Builds the chain for `r in (0, d1]` and verifies every inclusion both by
/// exact center/radius arithmetic and on sampled sphere points.
pub fn build_chain(cone: &ConeSpec, r: f64, eta1: f64) -> Result<ChainPlan> {
    cone.validate()?;
    if !(0.0 < eta1 && eta1 < 1.0) {
        return Err(UclabError::invalid("chain: eta1 must lie in (0, 1)"));
    }
    let sin_a = cone.alpha.sin();
    let alpha1 = (sin_a.min(cone.delta * (1.0 - sin_a))).asin();
    let s1 = alpha1.sin();
    let mu1 = cone.radius / (1.0 + s1);
    let rho1 = 0.25 * mu1 * eta1 * s1;
    let q = 0.25 * eta1 * s1;
    let a = (1.0 - q) / (1.0 + q);
    let d1 = mu1 - rho1;
    if !(r > 0.0 && r <= d1 + 1e-15) {
        return Err(UclabError::invalid(format!("chain: r must lie in (0, d1 = {d1}]")));
    }

    let mut mu = vec![mu1];
    let mut rho = vec![rho1];
    let mut gap = vec![d1];
    let mut k_bar = 1usize;
    while gap[k_bar - 1] > r && k_bar < 100_000 {
        mu.push(a * mu[k_bar - 1]);
        rho.push(a * rho[k_bar - 1]);
        gap.push(a * gap[k_bar - 1]);
        k_bar += 1;
    }
    if gap[k_bar - 1] > r {
        return Err(UclabError::numerical("chain: stopping index not reached"));
    }

    // stopping-index bracket
    let target = (r / d1).ln().abs() / a.ln().abs();
    if !(target <= (k_bar - 1) as f64 + 1e-9 && (k_bar - 1) as f64 <= target + 1.0 + 1e-9) {
        return Err(UclabError::Invariant(format!(
            "chain: k_bar = {k_bar} outside the bracket [{}, {}]",
            target,
            target + 1.0
        )));
    }

    // inclusion invariants by exact arithmetic for every k:
    //  (i) B_{rho_{k+1}}(w_{k+1}) inside B_{3 rho_k}(w_k)
    //  (ii) B_{4 rho_k / eta1}(w_k) inside the cone with aperture alpha1
    //  (iii) the cylinder over it (squared depth) inside the slab
    for k in 0..k_bar {
        if k + 1 < k_bar {
            let center_gap = mu[k] - mu[k + 1];
            if center_gap + rho[k + 1] > 3.0 * rho[k] + 1e-12 {
                return Err(UclabError::Invariant(format!(
                    "chain: ball inclusion (i) fails at k = {}",
                    k + 1
                )));
            }
        }
        let big = 4.0 * rho[k] / eta1; // = mu_k sin(alpha1)
        if big > mu[k] * s1 + 1e-12 {
            return Err(UclabError::Invariant(format!(
                "chain: tangency bound fails at k = {}",
                k + 1
            )));
        }
        if mu[k] + big > cone.radius + 1e-12 {
            return Err(UclabError::Invariant(format!(
                "chain: ball leaves B_R at k = {}",
                k + 1
            )));
        }
        // slab depth: the cylinder depth big^2 must not exceed the parabola
        // depth at the shallowest ball point, (delta (mu_k - big))^2
        if big.powi(2) > (cone.delta * (mu[k] - big)).powi(2) + 1e-12 {
            return Err(UclabError::Invariant(format!(
                "chain: slab inclusion (iii) fails at k = {}",
                k + 1
            )));
        }
    }

    // sampled verification on sphere points and cylinder times
    let plan = ChainPlan {
        alpha1,
        ratio_a: a,
        theta_star_log4_eta1: (4.0 / eta1).ln(),
        mu,
        rho,
        gap,
        k_bar,
        eta1,
    };
    let dim = cone.vertex_x.len();
    for k in 0..plan.k_bar.min(24) {
        let w = plan.center(cone, k);
        let big = 4.0 * plan.rho[k] / eta1;
        for s in 0..24 {
            let angle = 2.0 * std::f64::consts::PI * s as f64 / 24.0;
            // points on the sphere of radius big*(1-1e-9) around w_k
            let mut p = w.clone();
            if dim == 1 {
                p[0] += big * (1.0 - 1e-9) * if s % 2 == 0 { 1.0 } else { -1.0 };
            } else {
                p[0] += big * (1.0 - 1e-9) * angle.cos();
                p[1] += big * (1.0 - 1e-9) * angle.sin();
            }
            if !cone.contains_spatial(&p, plan.alpha1) {
                return Err(UclabError::Invariant(format!(
                    "chain: sampled sphere point leaves the cone at k = {}",
                    k + 1
                )));
            }
            let t_deep = cone.vertex_t - big * big * (1.0 - 1e-9);
            if !cone.contains_spacetime(&p, t_deep) {
                return Err(UclabError::Invariant(format!(
                    "chain: sampled cylinder point leaves the slab at k = {}",
                    k + 1
                )));
            }
        }
    }
    Ok(plan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cone_1d(alpha: f64, delta: f64, radius: f64) -> ConeSpec {
        ConeSpec {
            vertex_x: vec![0.0],
            vertex_t: 0.0,
            axis: vec![1.0],
            alpha,
            delta,
            radius,
            gamma: 1.0,
            h_budget: 1.0,
        }
    }

    #[test]
    fn immediate_stop_at_d1() {
        let cone = cone_1d(PI / 3.0, 1.0, 1.0);
        let eta1 = 0.25;
        // r = d1 stops the chain at k_bar = 1
        let s1 = (PI / 3.0).sin().min(1.0 - (PI / 3.0).sin());
        let mu1 = 1.0 / (1.0 + s1);
        let d1 = mu1 * (1.0 - 0.25 * eta1 * s1);
        let plan = build_chain(&cone, d1, eta1).unwrap();
        assert_eq!(plan.k_bar, 1);
    }

    #[test]
    fn bracket_holds_for_deep_chains() {
        let cone = cone_1d(PI / 4.0, 0.5, 1.0);
        let eta1 = 0.25;
        let sin_a = (PI / 4.0f64).sin();
        let s1 = (sin_a.min(0.5 * (1.0 - sin_a))).asin().sin();
        let mu1 = 1.0 / (1.0 + s1);
        let d1 = mu1 * (1.0 - 0.25 * eta1 * s1);
        // r = d1/10 forces several steps; the bracket is asserted inside
        let plan = build_chain(&cone, d1 / 10.0, eta1).unwrap();
        assert!(plan.k_bar > 1);
    }

    #[test]
    fn ratio_tends_to_one_as_aperture_closes() {
        // a -> 1- as alpha1 -> 0
        let eta1 = 0.25;
        let mut last = 0.0;
        for &alpha in &[0.5, 0.25, 0.1, 0.05] {
            let cone = cone_1d(alpha, 1.0, 1.0);
            let plan = build_chain(&cone, 0.01, eta1).unwrap();
            assert!(plan.ratio_a > last);
            last = plan.ratio_a;
        }
        assert!(last > 0.99);
    }

    #[test]
    fn chain_in_two_dimensions() {
        let cone = ConeSpec {
            vertex_x: vec![0.2, -0.1],
            vertex_t: 1.0,
            axis: vec![0.6, 0.8],
            alpha: PI / 4.0,
            delta: 0.8,
            radius: 0.7,
            gamma: 1.0,
            h_budget: 2.0,
        };
        let plan = build_chain(&cone, 0.05, 0.25).unwrap();
        assert!(plan.k_bar >= 2);
        // centers march toward the vertex along the axis
        let c0 = plan.center(&cone, 0);
        let c_last = plan.center(&cone, plan.k_bar - 1);
        let d0: f64 = c0.iter().zip(&cone.vertex_x).map(|(a, b)| (a - b).powi(2)).sum();
        let dl: f64 = c_last.iter().zip(&cone.vertex_x).map(|(a, b)| (a - b).powi(2)).sum();
        assert!(dl < d0);
    }

    #[test]
    fn out_of_range_r_rejected() {
        let cone = cone_1d(PI / 4.0, 1.0, 1.0);
        assert!(build_chain(&cone, 5.0, 0.25).is_err());
        assert!(build_chain(&cone, 0.0, 0.25).is_err());
    }
}
