//! Star-shaped 2D domains and sampled domain pairs.

use crate::{Result, UclabError};
use std::f64::consts::PI;

/// A 2D star-shaped domain given by a radial function g(omega) sampled on a
/// uniform circle grid (the subgraph { r < g(omega) } is star-shaped by
/// construction).
#[derive(Debug, Clone)]
pub struct StarDomain2D {
    /// radial samples at omega_i = 2 pi i / n, all positive
    pub radial: Vec<f64>,
}

impl StarDomain2D {
    pub fn new(radial: Vec<f64>) -> Result<Self> {
        if radial.len() < 8 {
            return Err(UclabError::invalid("star domain: need at least 8 radial samples"));
        }
        if radial.iter().any(|&g| g <= 0.0) {
            return Err(UclabError::Invariant("star domain: radial function must be positive".into()));
        }
        Ok(StarDomain2D { radial })
    }

    pub fn disk(radius: f64, n: usize) -> Self {
        StarDomain2D::new(vec![radius; n]).expect("positive radius")
    }

    pub fn from_fn(n: usize, g: impl Fn(f64) -> f64) -> Result<Self> {
        StarDomain2D::new((0..n).map(|i| g(2.0 * PI * i as f64 / n as f64)).collect())
    }

    pub fn eval(&self, omega: f64) -> f64 {
        let n = self.radial.len();
        let pos = omega.rem_euclid(2.0 * PI) / (2.0 * PI) * n as f64;
        let i = pos.floor() as usize % n;
        let s = pos - pos.floor();
        self.radial[i] * (1.0 - s) + self.radial[(i + 1) % n] * s
    }

    pub fn boundary_points(&self) -> Vec<[f64; 2]> {
        let n = self.radial.len();
        (0..n)
            .map(|i| {
                let w = 2.0 * PI * i as f64 / n as f64;
                [self.radial[i] * w.cos(), self.radial[i] * w.sin()]
            })
            .collect()
    }

    /// Dense area sampling along rays (n_r points per ray, plus the center).
    pub fn area_points(&self, n_r: usize) -> Vec<[f64; 2]> {
        let n = self.radial.len();
        let mut pts = vec![[0.0, 0.0]];
        for i in 0..n {
            let w = 2.0 * PI * i as f64 / n as f64;
            for j in 1..=n_r {
                let r = self.radial[i] * j as f64 / n_r as f64;
                pts.push([r * w.cos(), r * w.sin()]);
            }
        }
        pts
    }

    /// Relative-graph gap on radial graphs: sup of radial-function differences.
    pub fn radial_gap(&self, other: &StarDomain2D) -> Result<f64> {
        if self.radial.len() != other.radial.len() {
            return Err(UclabError::invalid("radial_gap: sample counts differ"));
        }
        Ok(self
            .radial
            .iter()
            .zip(&other.radial)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max))
    }
}

/// Two sampled closed sets plus their boundary samplings, with the grid
/// spacing recorded for error reporting.
#[derive(Debug, Clone)]
pub struct DomainPair {
    pub set_a: Vec<[f64; 2]>,
    pub set_b: Vec<[f64; 2]>,
    pub bdry_a: Vec<[f64; 2]>,
    pub bdry_b: Vec<[f64; 2]>,
    /// sampling pitch: nearest-point queries are resolved to this accuracy
    pub spacing: f64,
}

impl DomainPair {
    pub fn new(
        set_a: Vec<[f64; 2]>,
        set_b: Vec<[f64; 2]>,
        bdry_a: Vec<[f64; 2]>,
        bdry_b: Vec<[f64; 2]>,
        spacing: f64,
    ) -> Result<Self> {
        if set_a.is_empty() || set_b.is_empty() {
            return Err(UclabError::invalid("domain pair: empty set sampling"));
        }
        if spacing <= 0.0 {
            return Err(UclabError::invalid("domain pair: spacing must be positive"));
        }
        Ok(DomainPair { set_a, set_b, bdry_a, bdry_b, spacing })
    }

    pub fn from_stars(a: &StarDomain2D, b: &StarDomain2D, n_r: usize) -> Self {
        let max_r = a
            .radial
            .iter()
            .chain(&b.radial)
            .cloned()
            .fold(0.0f64, f64::max);
        let spacing = (2.0 * PI * max_r / a.radial.len() as f64).max(max_r / n_r as f64);
        DomainPair {
            set_a: a.area_points(n_r),
            set_b: b.area_points(n_r),
            bdry_a: a.boundary_points(),
            bdry_b: b.boundary_points(),
            spacing,
        }
    }

    /// The reference pair B_R versus B_R minus B_r (annulus), sampled densely.
    pub fn ball_vs_annulus(outer: f64, inner: f64, n: usize) -> Self {
        let disk = StarDomain2D::disk(outer, n);
        let set_a = disk.area_points(n / 4);
        let mut set_b = Vec::new();
        for i in 0..n {
            let w = 2.0 * PI * i as f64 / n as f64;
            for j in 0..=(n / 4) {
                let r = inner + (outer - inner) * j as f64 / (n / 4) as f64;
                set_b.push([r * w.cos(), r * w.sin()]);
            }
        }
        let bdry_a = disk.boundary_points();
        let mut bdry_b = disk.boundary_points();
        for i in 0..n {
            let w = 2.0 * PI * i as f64 / n as f64;
            bdry_b.push([inner * w.cos(), inner * w.sin()]);
        }
        let spacing = (2.0 * PI * outer / n as f64).max((outer - inner) / (n / 4) as f64);
        DomainPair { set_a, set_b, bdry_a, bdry_b, spacing }
    }

    /// 1D interval families embedded in the plane at y = 0.
    pub fn from_intervals(a: &[(f64, f64)], b: &[(f64, f64)], n_per_unit: usize) -> Result<Self> {
        let sample = |ivs: &[(f64, f64)]| -> (Vec<[f64; 2]>, Vec<[f64; 2]>) {
            let mut set = Vec::new();
            let mut bdry = Vec::new();
            for &(lo, hi) in ivs {
                let n = ((hi - lo) * n_per_unit as f64).ceil().max(2.0) as usize;
                for i in 0..=n {
                    set.push([lo + (hi - lo) * i as f64 / n as f64, 0.0]);
                }
                bdry.push([lo, 0.0]);
                bdry.push([hi, 0.0]);
            }
            (set, bdry)
        };
        let (set_a, bdry_a) = sample(a);
        let (set_b, bdry_b) = sample(b);
        DomainPair::new(set_a, set_b, bdry_a, bdry_b, 1.0 / n_per_unit as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_domain_requires_positive_radii() {
        assert!(StarDomain2D::new(vec![1.0, 0.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0]).is_err());
    }

    #[test]
    fn radial_gap_of_disks() {
        let a = StarDomain2D::disk(1.0, 64);
        let b = StarDomain2D::disk(0.85, 64);
        assert!((a.radial_gap(&b).unwrap() - 0.15).abs() < 1e-14);
    }
}
