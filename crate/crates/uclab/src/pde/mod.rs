//! Forward solvers for parabolic problems on fixed and moving domains,
//! Dirichlet eigensystems, the exact constant-coefficient heat kernel, and
//! the fundamental-solution memory estimate.

mod coeffs;
mod eigen;
mod field;
mod grid;
mod kernel;
mod memory;
mod moving;
mod solve_fixed;
mod sqrtm;
pub mod quad;
pub mod tridiag;

pub use coeffs::{Coefficients, DirichletBc, SolveOptions};
pub use eigen::{eigen_dirichlet, EigenSystem};
pub use field::{HeatField, Provenance};
pub use grid::Grid;
pub use kernel::heat_kernel;
pub use memory::{memory_estimate_check, MemoryReport};
pub use moving::solve_heat_moving;
pub use solve_fixed::{solve_heat_fixed, solve_heat_fixed_with_source};
pub use sqrtm::{sqrt_lipschitz_check, SqrtLipReport};
