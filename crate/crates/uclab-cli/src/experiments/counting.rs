//! Basis counting bound.

use super::util;
use crate::{Outcome, RunContext};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;
use uclab::instability::counting_check;
use uclab::{Result, UclabError};

#[derive(Debug, Serialize, Deserialize)]
pub struct Params {
    pub q_max: u32,
}

impl Default for Params {
    fn default() -> Self {
        Params { q_max: 100 }
    }
}

pub fn default_params() -> serde_json::Value {
    serde_json::to_value(Params::default()).unwrap()
}

pub fn run(ctx: &RunContext, params: &serde_json::Value) -> Result<Outcome> {
    let p: Params = serde_json::from_value(params.clone())
        .map_err(|e| UclabError::invalid(format!("counting params: {e}")))?;
    if p.q_max == 0 {
        return Err(UclabError::invalid("counting: q_max must be positive"));
    }
    let qs: Vec<u32> = (1..=p.q_max).collect();
    let rows = counting_check(&qs)?;
    let all_hold = rows.iter().all(|r| r.holds);
    let mut outcome = Outcome::default();
    outcome.push(
        "counting-bound",
        all_hold,
        format!("N1(q) <= 2 (1+q)^2 for q <= {}", p.q_max),
    );
    let csv: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| vec![r.q as f64, r.count as f64, r.bound as f64])
        .collect();
    util::write_csv_file(&ctx.path("counting.csv"), &["q", "count", "bound"], &csv)?;
    outcome.files.push(PathBuf::from("counting.csv"));
    Ok(outcome)
}
