//! The exponential-instability construction: weighted sine basis, DtN
//! matrices for moving 1D boundaries, the analytic Fourier reference, decay
//! verification, and the pigeonhole instability search.

mod basis;
mod decay;
mod dtn;
mod reference;
mod search;

pub use basis::{counting_check, mollify_g, mollify_gstar, CountRow, WeightedBasis};
pub use decay::{decay_fit, DecayFit};
pub use dtn::{
    adjointness_residual, assemble_dtn_matrix, operator_norm_upper, DtnMatrix, NormReport,
};
pub use reference::{reference_flux, reference_u_hat, y_hat};
pub use search::{instability_search, PigeonholeReport, SearchVerdict};
