//! Chain-of-balls smallness propagation, Cauchy-data stability experiments,
//! and the stability-budget calculators.

mod budget;
mod cauchy;
mod chain;
mod smallness;

pub use budget::{interior_lower_bound_log, stability_budget, BudgetCalib, StabilityBudget};
pub use cauchy::{cauchy_stability_experiment, CauchyConfig, CauchyReport, CauchySweepPoint};
pub use chain::{build_chain, ChainPlan, ConeSpec};
pub use smallness::{propagate_smallness, PropagationReport};
