//! Exponential decay fits of matrix entries against the frequency functional.

use super::dtn::DtnMatrix;
use crate::{Result, UclabError};

/// Fitted model `|M_(n,n')| <= K exp(-k max(gamma_n, gamma_n'))`.
#[derive(Debug, Clone, Copy)]
pub struct DecayFit {
    pub big_k: f64,
    pub k_rate: f64,
    /// rms residual of the log fit
    pub residual_rms: f64,
    pub n_points: usize,
}

/// Least-squares fit of `log |M_(n,n')|` against `max(gamma_n, gamma_n')`.
/// Entries below the relative floor 1e-13 are treated as numerically zero.
pub fn decay_fit(m: &DtnMatrix) -> Result<DecayFit> {
    let peak = m.entries.amax();
    if peak == 0.0 {
        return Err(UclabError::degenerate("decay_fit: nothing to fit (zero matrix)"));
    }
    let floor = peak * 1e-13;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for n in 1..=m.n_basis {
        for p in 1..=m.n_basis {
            let v = m.entries[(n - 1, p - 1)].abs();
            if v > floor {
                let gamma = (0.5 * n.max(p) as f64).sqrt();
                xs.push(gamma);
                ys.push(v.ln());
            }
        }
    }
    if xs.len() < 8 {
        return Err(UclabError::degenerate(format!(
            "decay_fit: only {} usable entries (need 8)",
            xs.len()
        )));
    }
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| x * y).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    let k_rate = -slope;
    if k_rate <= 0.0 {
        return Err(UclabError::Invariant(format!(
            "decay_fit: fitted rate {k_rate} not positive"
        )));
    }
    let residual_rms = (xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (intercept + slope * x)).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(DecayFit { big_k: intercept.exp(), k_rate, residual_rms, n_points: xs.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    #[test]
    fn synthetic_exact_fit() {
        let n_basis = 8;
        let mut entries = DMatrix::zeros(n_basis, n_basis);
        for n in 1..=n_basis {
            for p in 1..=n_basis {
                let gamma = (0.5 * n.max(p) as f64).sqrt();
                entries[(n - 1, p - 1)] = (-gamma).exp();
            }
        }
        let m = DtnMatrix { entries, n_basis, nx: 4, nt: 4 };
        let fit = decay_fit(&m).unwrap();
        assert!((fit.k_rate - 1.0).abs() < 1e-10, "k = {}", fit.k_rate);
        assert!((fit.big_k - 1.0).abs() < 1e-10, "K = {}", fit.big_k);
        assert!(fit.residual_rms < 1e-12);
    }

    #[test]
    fn zero_matrix_rejected() {
        let m = DtnMatrix { entries: DMatrix::zeros(6, 6), n_basis: 6, nx: 4, nt: 4 };
        assert!(matches!(decay_fit(&m), Err(UclabError::Degenerate(_))));
    }

    #[test]
    fn growing_entries_rejected() {
        let n_basis = 6;
        let mut entries = DMatrix::zeros(n_basis, n_basis);
        for n in 1..=n_basis {
            for p in 1..=n_basis {
                let gamma = (0.5 * n.max(p) as f64).sqrt();
                entries[(n - 1, p - 1)] = gamma.exp();
            }
        }
        let m = DtnMatrix { entries, n_basis, nx: 4, nt: 4 };
        assert!(decay_fit(&m).is_err());
    }
}
