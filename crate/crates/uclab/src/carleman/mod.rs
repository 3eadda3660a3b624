//! Carleman weight construction and estimate audit.

mod audit;
mod weight;
mod young;

pub use audit::{carleman_audit, carleman_audit_with_table, AuditReport, CarlemanTestFn, Metric1d};
pub use weight::{erfc, sigma, sigma_table, theta, theta_c0, theta_inner_integral, upper_gamma_52_quadrature, SigmaTable, WeightConfig, DELTA1};
pub use young::{young_log_check, YoungReport};
