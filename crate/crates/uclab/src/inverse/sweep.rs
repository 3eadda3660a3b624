//! Noise sweeps and the stability-curve fits.

use super::instance::{make_instance, InverseInstance};
use super::reconstruct::reconstruct;
use crate::par::par_map_indexed;
use crate::{Result, UclabError};
use serde::Serialize;
use std::sync::Arc;

/// One sweep row: noise level and the mean reconstruction error.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct StabilityRow {
    pub eps: f64,
    pub mean_d0: f64,
    pub min_d0: f64,
    pub max_d0: f64,
    pub trials: usize,
}

/// Regression of the rows against a power law and a log law.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FitComparison {
    /// e = a eps^p
    pub power_p: f64,
    pub power_rss: f64,
    /// e = C1 |log eps|^(-1/C2)
    pub log_c1: f64,
    pub log_c2: f64,
    pub log_rss: f64,
    pub log_wins: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilityTable {
    pub rows: Vec<StabilityRow>,
    pub fit: Option<FitComparison>,
}

/// Runs `trials` reconstructions per noise level with fresh noise, then fits
/// both laws to the mean errors. Levels must be sorted descending; at least
/// three levels are needed for the fits.
pub fn stability_curve(
    template: &InverseInstance,
    eps_list: &[f64],
    trials: usize,
    param_dim: usize,
    reg_weight: f64,
    seed: u64,
) -> Result<StabilityTable> {
    if eps_list.is_empty() {
        return Err(UclabError::invalid("stability_curve: empty eps list"));
    }
    if eps_list.windows(2).any(|w| w[0] <= w[1]) {
        return Err(UclabError::invalid("stability_curve: eps_list must be descending"));
    }
    if template.datum_norm() == 0.0 {
        return Err(UclabError::degenerate("stability_curve: degenerate instance (zero datum)"));
    }

    let jobs: Vec<(usize, usize)> = eps_list
        .iter()
        .enumerate()
        .flat_map(|(i, _)| (0..trials).map(move |t| (i, t)))
        .collect();
    let template = Arc::new(template.clone());
    let eps_arc = Arc::new(eps_list.to_vec());
    let errors: Vec<Result<(usize, f64)>> = par_map_indexed(jobs.len(), |idx| {
        let (level, trial) = jobs[idx];
        let eps = eps_arc[level];
        let inst = make_instance(
            template.s_star.clone(),
            template.f.clone(),
            template.f1_floor.clone(),
            eps,
            &template.grid,
            seed.wrapping_add((level * 1009 + trial) as u64),
        )?;
        let rec = reconstruct(&inst, param_dim, reg_weight)?;
        Ok((level, rec.d0_error))
    });

    let mut per_level: Vec<Vec<f64>> = vec![Vec::new(); eps_list.len()];
    for r in errors {
        let (level, e) = r?;
        per_level[level].push(e);
    }
    let rows: Vec<StabilityRow> = eps_list
        .iter()
        .zip(&per_level)
        .map(|(&eps, errs)| StabilityRow {
            eps,
            mean_d0: errs.iter().sum::<f64>() / errs.len() as f64,
            min_d0: errs.iter().cloned().fold(f64::INFINITY, f64::min),
            max_d0: errs.iter().cloned().fold(0.0, f64::max),
            trials: errs.len(),
        })
        .collect();

    let fit = if rows.len() >= 3 && rows.iter().all(|r| r.mean_d0 > 0.0) {
        Some(fit_laws(&rows))
    } else {
        None
    };
    Ok(StabilityTable { rows, fit })
}

fn linreg(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    let rss = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    (slope, intercept, rss)
}

fn fit_laws(rows: &[StabilityRow]) -> FitComparison {
    let ys: Vec<f64> = rows.iter().map(|r| r.mean_d0.ln()).collect();
    // power law: ln e = p ln eps + a
    let xp: Vec<f64> = rows.iter().map(|r| r.eps.ln()).collect();
    let (p, _, power_rss) = linreg(&xp, &ys);
    // log law: ln e = ln C1 - (1/C2) ln |ln eps|
    let xl: Vec<f64> = rows.iter().map(|r| r.eps.ln().abs().ln()).collect();
    let (slope, intercept, log_rss) = linreg(&xl, &ys);
    let log_c2 = if slope < 0.0 { -1.0 / slope } else { f64::INFINITY };
    FitComparison {
        power_p: p,
        power_rss,
        log_c1: intercept.exp(),
        log_c2,
        log_rss,
        log_wins: log_rss < power_rss,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inverse::reconstruct::candidate_curve;
    use crate::pde::Grid;
    use std::f64::consts::PI;

    #[test]
    fn single_level_gives_row_without_fit() {
        let s_star = candidate_curve(&[0.05, 0.02], 0.1, 0.0, 1.0, 2, 60.0, 128).unwrap();
        let grid = Grid::new_1d(0.0, 1.0, 48, 0.0, 1.0, 96).unwrap();
        let inst = make_instance(
            s_star,
            Arc::new(|t: f64| (PI * t).sin().powi(2)),
            Arc::new(|_| 0.0),
            0.0,
            &grid,
            1,
        )
        .unwrap();
        let table = stability_curve(&inst, &[1e-4], 2, 2, 1e-8, 11).unwrap();
        assert_eq!(table.rows.len(), 1);
        assert!(table.fit.is_none());
    }

    #[test]
    fn errors_shrink_with_noise() {
        let s_star = candidate_curve(&[0.06, 0.03], 0.1, 0.0, 1.0, 2, 60.0, 128).unwrap();
        let grid = Grid::new_1d(0.0, 1.0, 48, 0.0, 1.0, 96).unwrap();
        let inst = make_instance(
            s_star,
            Arc::new(|t: f64| (PI * t).sin().powi(2) + 0.4 * (2.0 * PI * t).sin().powi(2)),
            Arc::new(|_| 0.0),
            0.0,
            &grid,
            1,
        )
        .unwrap();
        let table =
            stability_curve(&inst, &[1e-4, 1e-5, 1e-6], 3, 2, 1e-9, 5).unwrap();
        assert!(table.rows[0].mean_d0 >= table.rows[2].mean_d0 * 0.8);
        assert!(table.fit.is_some());
    }
}
