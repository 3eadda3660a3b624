//! Domains, time-varying boundary graphs, distances between domains, and
//! discrete boundary families.

mod curve;
mod distance;
mod domain;
mod family;

pub use curve::{BoundaryCurve, CurveForm};
pub use distance::{hausdorff_distance, hausdorff_time_modulus, modified_distance, sup_distance};
pub use domain::{DomainPair, StarDomain2D};
pub use family::{bump_profile, epsilon0, generate_discrete_family, keyed_family, max_family_size};
