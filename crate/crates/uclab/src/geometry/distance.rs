//! Distances between boundary curves and between sampled domains.

use super::{BoundaryCurve, DomainPair};
use crate::{Result, UclabError};

/// d0(s1, s2) = sup |s1 - s2| over the shared grid.
pub fn sup_distance(s1: &BoundaryCurve, s2: &BoundaryCurve) -> Result<f64> {
    if (s1.t_lo - s2.t_lo).abs() > 1e-12
        || (s1.t_hi - s2.t_hi).abs() > 1e-12
        || s1.grid_n != s2.grid_n
    {
        return Err(UclabError::invalid("sup_distance: curves live on different grids"));
    }
    let a = s1.samples();
    let b = s2.samples();
    Ok(a.iter()
        .zip(&b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0f64, f64::max))
}

fn dist(p: &[f64; 2], q: &[f64; 2]) -> f64 {
    ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt()
}

fn directed_sup_inf(from: &[[f64; 2]], to: &[[f64; 2]]) -> f64 {
    let mut worst = 0.0f64;
    for p in from {
        let mut best = f64::INFINITY;
        for q in to {
            let d = dist(p, q);
            if d < best {
                best = d;
            }
        }
        worst = worst.max(best);
    }
    worst
}

/// Hausdorff distance between the two sampled closed sets, with a reported
/// discretization error bound of one grid spacing.
#[derive(Debug, Clone, Copy)]
pub struct DistanceReport {
    pub value: f64,
    pub error_bound: f64,
}

pub fn hausdorff_distance(p: &DomainPair) -> Result<DistanceReport> {
    if p.set_a.is_empty() || p.set_b.is_empty() {
        return Err(UclabError::invalid("hausdorff_distance: empty set sampling"));
    }
    let d_ab = directed_sup_inf(&p.set_a, &p.set_b);
    let d_ba = directed_sup_inf(&p.set_b, &p.set_a);
    Ok(DistanceReport { value: d_ab.max(d_ba), error_bound: p.spacing })
}

/// Modified distance: boundary points of each set against the closure of the
/// other (closure = set samples together with its boundary samples).
pub fn modified_distance(p: &DomainPair) -> Result<DistanceReport> {
    if p.bdry_a.is_empty() || p.bdry_b.is_empty() {
        return Err(UclabError::invalid("modified_distance: empty boundary sampling"));
    }
    let closure_a: Vec<[f64; 2]> = p.set_a.iter().chain(&p.bdry_a).cloned().collect();
    let closure_b: Vec<[f64; 2]> = p.set_b.iter().chain(&p.bdry_b).cloned().collect();
    let d_ab = directed_sup_inf(&p.bdry_a, &closure_b);
    let d_ba = directed_sup_inf(&p.bdry_b, &closure_a);
    Ok(DistanceReport { value: d_ab.max(d_ba), error_bound: p.spacing })
}

/// Empirical Lipschitz-in-time modulus of the Hausdorff distance along a
/// time-indexed family of pairs: max over adjacent times of |d_H(t+dt) -
/// d_H(t)| / dt.
pub fn hausdorff_time_modulus(times: &[f64], pairs: &[DomainPair]) -> Result<f64> {
    if times.len() != pairs.len() {
        return Err(UclabError::invalid("hausdorff_time_modulus: times/pairs length mismatch"));
    }
    if times.len() < 2 {
        return Err(UclabError::invalid("hausdorff_time_modulus: need at least 2 time samples"));
    }
    let d: Vec<f64> = pairs
        .iter()
        .map(|p| hausdorff_distance(p).map(|r| r.value))
        .collect::<Result<_>>()?;
    let mut modulus = 0.0f64;
    for i in 1..times.len() {
        let dt = times[i] - times[i - 1];
        if dt <= 0.0 {
            return Err(UclabError::invalid("hausdorff_time_modulus: times must increase"));
        }
        modulus = modulus.max((d[i] - d[i - 1]).abs() / dt);
    }
    Ok(modulus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::StarDomain2D;

    #[test]
    fn sup_distance_identity_and_offset() {
        let s = BoundaryCurve::constant_one(0.0, 1.0, 2, 10.0, 64);
        assert_eq!(sup_distance(&s, &s).unwrap(), 0.0);
        let shifted = BoundaryCurve::from_analytic(
            0.0,
            1.0,
            2,
            10.0,
            0.1,
            |t| 1.0 + 0.1 * (std::f64::consts::PI * t).sin().powi(2),
            |t| 0.1 * std::f64::consts::PI * (2.0 * std::f64::consts::PI * t).sin() / 2.0 * 2.0,
            64,
        )
        .unwrap();
        // midpoint reaches the full 0.1 amplitude
        let d = sup_distance(&s, &shifted).unwrap();
        assert!((d - 0.1).abs() < 1e-12);
    }

    #[test]
    fn sup_distance_rejects_mismatched_grids() {
        let a = BoundaryCurve::constant_one(0.0, 1.0, 2, 10.0, 64);
        let b = BoundaryCurve::constant_one(0.0, 1.0, 2, 10.0, 128);
        assert!(sup_distance(&a, &b).is_err());
    }

    #[test]
    fn hausdorff_identity_is_zero() {
        let a = StarDomain2D::disk(1.0, 256);
        let p = DomainPair::from_stars(&a, &a, 48);
        assert_eq!(hausdorff_distance(&p).unwrap().value, 0.0);
    }

    #[test]
    fn ball_vs_annulus_matches_paper_example() {
        // Omega1 = B_1, Omega2 = B_1 minus B_{1/2}: d_H = 1/2, d_m = 0
        let p = DomainPair::ball_vs_annulus(1.0, 0.5, 220);
        let dh = hausdorff_distance(&p).unwrap();
        assert!((dh.value - 0.5).abs() < 2.0 * dh.error_bound, "d_H {}", dh.value);
        let dm = modified_distance(&p).unwrap();
        assert!(dm.value <= 2.0 * dm.error_bound, "d_m {}", dm.value);
    }

    #[test]
    fn concentric_disks() {
        let a = StarDomain2D::disk(1.0, 256);
        let b = StarDomain2D::disk(0.8, 256);
        let p = DomainPair::from_stars(&a, &b, 64);
        let dh = hausdorff_distance(&p).unwrap();
        assert!((dh.value - 0.2).abs() < 2.0 * dh.error_bound);
    }

    #[test]
    fn modulus_constant_in_time_is_zero() {
        let a = StarDomain2D::disk(1.0, 128);
        let b = StarDomain2D::disk(0.9, 128);
        let p = DomainPair::from_stars(&a, &b, 32);
        let times = [0.0, 0.5, 1.0];
        let pairs = vec![p.clone(), p.clone(), p];
        assert_eq!(hausdorff_time_modulus(&times, &pairs).unwrap(), 0.0);
    }

    #[test]
    fn modulus_needs_two_samples() {
        let a = StarDomain2D::disk(1.0, 64);
        let p = DomainPair::from_stars(&a, &a, 16);
        assert!(hausdorff_time_modulus(&[0.0], &[p]).is_err());
    }
}
