//! One module per registered experiment.

pub mod carleman;
pub mod cauchy;
pub mod continuation;
pub mod counting;
pub mod instability;
pub mod inverse;
pub mod kernel;
pub mod propagation;
pub mod three_sphere;
pub mod two_sphere;
mod util;
