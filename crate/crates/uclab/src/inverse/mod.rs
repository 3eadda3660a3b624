//! Desk-scale inverse boundary identification: reconstruct a time-varying
//! boundary from noisy flux data and measure the stability curve.

mod instance;
mod reconstruct;
mod sweep;

pub use instance::{forward_flux, make_instance, InverseInstance};
pub use reconstruct::{candidate_curve, reconstruct, ReconstructionResult};
pub use sweep::{stability_curve, FitComparison, StabilityRow, StabilityTable};
