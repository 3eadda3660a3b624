//! Numerical laboratory for quantitative unique continuation in parabolic
//! equations and the inverse problem of determining an unknown time-varying
//! boundary from thermal Cauchy data.
//!
//! The crate is organized around the machinery it verifies:
//!
//! - [`geometry`]: time-varying boundary graphs, Hausdorff/modified distances,
//!   discrete curve families.
//! - [`pde`]: forward solvers (fixed and moving 1D domains, 2D rectangles),
//!   Dirichlet eigensystems, the exact heat kernel, and the fundamental-solution
//!   memory estimate.
//! - [`continuation`]: the elliptic-companion construction and empirical
//!   three-sphere / two-sphere one-cylinder inequality checks.
//! - [`carleman`]: weight functions and a numeric audit of the parabolic
//!   Carleman estimate.
//! - [`propagation`]: chain-of-balls smallness propagation, Cauchy-data
//!   stability experiments, and stability-budget calculators.
//! - [`inverse`]: boundary reconstruction from noisy flux data and the
//!   logarithmic stability curve.
//! - [`instability`]: weighted sine basis, Dirichlet-to-Neumann matrices for
//!   moving boundaries, entry-decay fits, and the pigeonhole instability search.
//!
//! Inner loops (matrix assembly, sweeps, quadrature suites) are data parallel.
//! With the default `parallel` feature they run on rayon; without it the same
//! code paths run sequentially.

pub mod carleman;
pub mod continuation;
pub mod error;
pub mod geometry;
pub mod instability;
pub mod inverse;
pub mod output;
pub mod par;
pub mod pde;
pub mod propagation;
pub mod tolerances;

pub use error::{Result, UclabError};
