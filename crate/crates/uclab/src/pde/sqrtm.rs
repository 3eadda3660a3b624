//! Lipschitz bound on the positive square root of a matrix path.

use crate::{Result, UclabError};
use nalgebra::DMatrix;

/// Finite-difference estimate of |d/dt sqrt(A)| along a sampled path,
/// compared against the bound `2^(3/2) lambda0^(-7/2) Lambda0`.
#[derive(Debug, Clone)]
pub struct SqrtLipReport {
    /// max over sample pairs of |sqrt(A(t+dt)) - sqrt(A(t))| / dt (spectral norm)
    pub max_sqrt_derivative: f64,
    /// the proven bound evaluated with the sampled lambda0, Lambda0
    pub bound: f64,
    /// sampled two-sided ellipticity constant
    pub lambda0: f64,
    /// sampled Lipschitz constant of A itself
    pub lambda_lip: f64,
    pub holds: bool,
}

fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    m.clone().svd(false, false).singular_values[0]
}

fn sqrt_spd(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let sym = nalgebra::SymmetricEigen::new(m.clone());
    if sym.eigenvalues.iter().any(|&l| l <= 0.0) {
        return Err(UclabError::invalid("matrix path: sample not positive definite"));
    }
    let d = DMatrix::from_diagonal(&sym.eigenvalues.map(|l| l.sqrt()));
    Ok(&sym.eigenvectors * d * sym.eigenvectors.transpose())
}

/// Checks symmetry/definiteness of every sample, extracts lambda0 and
/// Lambda0 from the path itself, and verifies the square-root Lipschitz bound.
pub fn sqrt_lipschitz_check(path: &[(f64, DMatrix<f64>)]) -> Result<SqrtLipReport> {
    if path.len() < 2 {
        return Err(UclabError::invalid("matrix path: need at least two samples"));
    }
    let n = path[0].1.nrows();
    let mut lambda_lo = f64::INFINITY;
    let mut lambda_hi: f64 = 0.0;
    for (t, a) in path {
        if a.nrows() != n || a.ncols() != n {
            return Err(UclabError::invalid("matrix path: inconsistent dimensions"));
        }
        if (a - a.transpose()).amax() > 1e-10 {
            return Err(UclabError::invalid(format!("matrix path: sample at t = {t} not symmetric")));
        }
        let sym = nalgebra::SymmetricEigen::new(a.clone());
        let lo = sym.eigenvalues.min();
        let hi = sym.eigenvalues.max();
        if lo <= 0.0 {
            return Err(UclabError::invalid(format!(
                "matrix path: sample at t = {t} not positive definite"
            )));
        }
        lambda_lo = lambda_lo.min(lo);
        lambda_hi = lambda_hi.max(hi);
    }
    // lambda0 such that lambda0 |xi|^2 <= A xi.xi <= lambda0^-1 |xi|^2
    let lambda0 = lambda_lo.min(1.0 / lambda_hi).min(1.0);

    let mut lambda_lip: f64 = 0.0;
    let mut max_dsqrt: f64 = 0.0;
    let mut prev_sqrt = sqrt_spd(&path[0].1)?;
    for w in path.windows(2) {
        let (t0, a0) = &w[0];
        let (t1, a1) = &w[1];
        let dt = t1 - t0;
        if dt <= 0.0 {
            return Err(UclabError::invalid("matrix path: times must increase"));
        }
        lambda_lip = lambda_lip.max(spectral_norm(&(a1 - a0)) / dt);
        let s1 = sqrt_spd(a1)?;
        max_dsqrt = max_dsqrt.max(spectral_norm(&(&s1 - &prev_sqrt)) / dt);
        prev_sqrt = s1;
    }

    let bound = 2.0f64.powf(1.5) * lambda0.powf(-3.5) * lambda_lip;
    Ok(SqrtLipReport {
        max_sqrt_derivative: max_dsqrt,
        bound,
        lambda0,
        lambda_lip,
        holds: max_dsqrt <= bound * (1.0 + 1e-9),
    })
}
