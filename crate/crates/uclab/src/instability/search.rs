//! Pigeonhole instability search: assemble the truncated DtN matrices of an
//! eps-discrete family and locate the pair with the closest measurements.

use super::dtn::{assemble_dtn_matrix, operator_norm_upper, DtnMatrix};
use crate::geometry::{sup_distance, BoundaryCurve};
use crate::par::par_map_indexed;
use crate::pde::Grid;
use crate::{Result, UclabError};
use serde::Serialize;

/// Bucket statistics of the quantized low-frequency block, reported next to
/// the exhaustive scan (the theorem's mechanism, made visible).
#[derive(Debug, Clone, Serialize)]
pub struct PigeonholeReport {
    /// gamma cutoff of the low block
    pub gamma_cut: f64,
    /// quantization step exp(-gamma_N)
    pub step: f64,
    pub buckets: usize,
    pub largest_bucket: usize,
    /// the abstract theorem's pair-norm threshold 2 exp(-eps^(-1/(6m)))
    pub epsilon1_threshold: f64,
}

/// The returned pair and its measured distance data.
#[derive(Debug, Clone, Serialize)]
pub struct SearchVerdict {
    pub s1_id: usize,
    pub s2_id: usize,
    pub d0: f64,
    pub norm: f64,
    pub delta: f64,
    pub pigeonhole: PigeonholeReport,
}

/// Verifies the family is pairwise `eps`-discrete, assembles all matrices,
/// and returns the pair whose truncated operators are closest in spectral
/// norm. The quantized low-block bucket statistics ride along.
pub fn instability_search(
    family: &[BoundaryCurve],
    eps: f64,
    n_basis: usize,
    grid: &Grid,
) -> Result<SearchVerdict> {
    if family.len() < 2 {
        return Err(UclabError::invalid("instability_search: need at least two members"));
    }
    for (i, s) in family.iter().enumerate() {
        s.validate().map_err(|e| {
            UclabError::invalid(format!("instability_search: member {i} invalid: {e}"))
        })?;
        for (j, other) in family.iter().enumerate().skip(i + 1) {
            let d = sup_distance(s, other)?;
            if d < eps * (1.0 - 1e-9) {
                return Err(UclabError::Invariant(format!(
                    "instability_search: members {i}, {j} at distance {d} < eps = {eps}"
                )));
            }
        }
    }

    let matrices: Vec<Result<DtnMatrix>> =
        par_map_indexed(family.len(), |i| assemble_dtn_matrix(&family[i], n_basis, grid));
    let matrices: Vec<DtnMatrix> = matrices
        .into_iter()
        .enumerate()
        .map(|(i, m)| m.map_err(|e| UclabError::numerical(format!("member {i}: {e}"))))
        .collect::<Result<_>>()?;

    // exhaustive pair scan over operator norms of differences
    let mut best = (0usize, 1usize, f64::INFINITY);
    for i in 0..matrices.len() {
        for j in i + 1..matrices.len() {
            let diff = DtnMatrix {
                entries: &matrices[i].entries - &matrices[j].entries,
                n_basis,
                nx: grid.nx,
                nt: grid.nt,
            };
            let norm = operator_norm_upper(&diff, None).truncated;
            if norm < best.2 {
                best = (i, j, norm);
            }
        }
    }

    // pigeonhole bookkeeping: quantize the low block at step exp(-gamma_N)
    let gamma_n = (0.5 * n_basis as f64).sqrt();
    let gamma_cut = 0.5 * gamma_n;
    let step = (-gamma_n).exp();
    let mut buckets: std::collections::HashMap<Vec<i64>, usize> = std::collections::HashMap::new();
    for m in &matrices {
        let mut key = Vec::new();
        for n in 1..=n_basis {
            for p in 1..=n_basis {
                let gamma = (0.5 * n.max(p) as f64).sqrt();
                if gamma <= gamma_cut {
                    key.push((m.entries[(n - 1, p - 1)] / step).round() as i64);
                }
            }
        }
        *buckets.entry(key).or_insert(0) += 1;
    }
    let largest_bucket = buckets.values().cloned().max().unwrap_or(0);
    let m_smooth = family[0].m.max(1) as f64;
    let pigeonhole = PigeonholeReport {
        gamma_cut,
        step,
        buckets: buckets.len(),
        largest_bucket,
        epsilon1_threshold: 2.0 * (-eps.powf(-1.0 / (6.0 * m_smooth))).exp(),
    };

    let d0 = sup_distance(&family[best.0], &family[best.1])?;
    if d0 < eps * (1.0 - 1e-9) {
        return Err(UclabError::Invariant(
            "instability_search: returned pair below the discreteness threshold".into(),
        ));
    }
    Ok(SearchVerdict {
        s1_id: best.0,
        s2_id: best.1,
        d0,
        norm: best.2,
        delta: eps,
        pigeonhole,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::generate_discrete_family;
    use std::f64::consts::PI;

    fn strip_grid() -> Grid {
        Grid::new_1d(0.0, 1.0, 48, 0.0, 2.0 * PI, 768).unwrap()
    }

    #[test]
    fn family_of_two_returns_that_pair() {
        let fam = generate_discrete_family(2, 10.0, 0.1, 2, PI / 2.0, 1.5 * PI).unwrap();
        let verdict = instability_search(&fam, 0.1, 4, &strip_grid()).unwrap();
        assert_eq!((verdict.s1_id, verdict.s2_id), (0, 1));
        assert!(verdict.d0 >= 0.1);
        assert!(verdict.norm > 0.0);
    }

    #[test]
    fn returned_pair_is_global_minimum() {
        // exhaustive oracle over a family of 8: the verdict pair must attain
        // the minimum over all 28 pairwise norms
        let fam = generate_discrete_family(2, 10.0, 0.08, 8, PI / 2.0, 1.5 * PI).unwrap();
        let grid = strip_grid();
        let verdict = instability_search(&fam, 0.08, 4, &grid).unwrap();
        let mats: Vec<_> = fam
            .iter()
            .map(|s| assemble_dtn_matrix(s, 4, &grid).unwrap())
            .collect();
        let mut min_norm = f64::INFINITY;
        for i in 0..fam.len() {
            for j in i + 1..fam.len() {
                let d = &mats[i].entries - &mats[j].entries;
                min_norm = min_norm.min(d.clone().svd(false, false).singular_values[0]);
            }
        }
        assert!((verdict.norm - min_norm).abs() <= 1e-12 * (1.0 + min_norm));
    }

    #[test]
    fn single_member_rejected() {
        let fam = generate_discrete_family(2, 10.0, 0.1, 1, PI / 2.0, 1.5 * PI).unwrap();
        assert!(instability_search(&fam, 0.1, 4, &strip_grid()).is_err());
    }

    #[test]
    fn non_discrete_family_rejected() {
        let fam = generate_discrete_family(2, 10.0, 0.1, 2, PI / 2.0, 1.5 * PI).unwrap();
        // demand a larger separation than the family provides
        assert!(instability_search(&fam, 0.2, 4, &strip_grid()).is_err());
    }
}
