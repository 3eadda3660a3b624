//! Elliptic continuation pipeline: reflection extension, solution splitting,
//! the time Fourier transform, the elliptic companion field, and empirical
//! three-sphere / two-sphere one-cylinder inequalities.

mod companion;
mod fourier;
mod reflect;
mod spheres;
mod split;

pub use companion::{build_companion, CompanionParams, EllipticCompanion};
pub use fourier::{fourier_time, FourierData};
pub use reflect::reflect_extend;
pub use spheres::{
    disk_integral_sq, harmonic_poly_disk_integral, odd_reflection_1d, three_sphere_check,
    three_sphere_fit, two_sphere_one_cylinder_check, EllipticField2d, SphereCheck, SphereTriple,
    TwoSphereCheck,
};
pub use split::{split_solution, SplitSolution};
