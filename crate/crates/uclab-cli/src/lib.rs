//! Experiment registry and runner. Each experiment validates its parameter
//! block, runs deterministically for a given seed, writes CSV/SVG artifacts
//! plus a manifest (inputs echo, tolerance table, content hashes), and
//! reports one pass/fail row per check.

pub mod experiments;
mod manifest;

use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use uclab::tolerances::{Calibration, Tolerances};

/// A single named check inside an experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckRow {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// What an experiment hands back to the runner.
#[derive(Debug, Default)]
pub struct Outcome {
    pub checks: Vec<CheckRow>,
    /// files written relative to the output directory
    pub files: Vec<PathBuf>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn push(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(CheckRow { name: name.into(), pass, detail: detail.into() });
    }
}

/// Shared run context.
pub struct RunContext {
    pub out_dir: PathBuf,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub calibration: Calibration,
}

impl RunContext {
    pub fn path(&self, file: &str) -> PathBuf {
        self.out_dir.join(file)
    }
}

/// Registry entry: name, default parameter block, expected runtime.
pub struct ExperimentSpec {
    pub name: &'static str,
    pub about: &'static str,
    pub expected_runtime: &'static str,
    pub default_params: fn() -> serde_json::Value,
    pub run: fn(&RunContext, &serde_json::Value) -> Result<Outcome, uclab::UclabError>,
}

/// All registered experiments.
pub fn registry() -> Vec<ExperimentSpec> {
    use experiments::*;
    vec![
        ExperimentSpec {
            name: "kernel-checks",
            about: "heat kernel contract: delta-family convergence, backward vanishing",
            expected_runtime: "< 1 s",
            default_params: kernel::default_params,
            run: kernel::run,
        },
        ExperimentSpec {
            name: "continuation",
            about: "elliptic companion construction and its trace/residual invariants",
            expected_runtime: "< 60 s",
            default_params: continuation::default_params,
            run: continuation::run,
        },
        ExperimentSpec {
            name: "three-sphere",
            about: "three-sphere inequality on 2D harmonic polynomials",
            expected_runtime: "< 20 s",
            default_params: three_sphere::default_params,
            run: three_sphere::run,
        },
        ExperimentSpec {
            name: "two-sphere",
            about: "two-sphere one-cylinder inequality on caloric fields",
            expected_runtime: "< 60 s",
            default_params: two_sphere::default_params,
            run: two_sphere::run,
        },
        ExperimentSpec {
            name: "carleman-audit",
            about: "Carleman weight invariants and the estimate audit suite",
            expected_runtime: "< 5 min",
            default_params: carleman::default_params,
            run: carleman::run,
        },
        ExperimentSpec {
            name: "propagation",
            about: "ball-chain inclusions and smallness propagation bounds",
            expected_runtime: "< 60 s",
            default_params: propagation::default_params,
            run: propagation::run,
        },
        ExperimentSpec {
            name: "cauchy-stability",
            about: "Hoelder stability sweep from perturbed Cauchy data",
            expected_runtime: "< 5 min",
            default_params: cauchy::default_params,
            run: cauchy::run,
        },
        ExperimentSpec {
            name: "inverse-stability",
            about: "boundary reconstruction sweep and the log-law fit",
            expected_runtime: "< 20 min",
            default_params: inverse::default_params,
            run: inverse::run,
        },
        ExperimentSpec {
            name: "instability",
            about: "DtN oracle cross-check, entry decay, and the pigeonhole search",
            expected_runtime: "< 30 min (search mode)",
            default_params: instability::default_params,
            run: instability::run,
        },
        ExperimentSpec {
            name: "counting",
            about: "basis counting bound N1(q) <= 2 (1+q)^2",
            expected_runtime: "< 1 s",
            default_params: counting::default_params,
            run: counting::run,
        },
    ]
}

/// Runs one experiment end to end; returns the outcome after writing the
/// manifest and the pass/fail table.
pub fn run_experiment(
    name: &str,
    params: serde_json::Value,
    out_dir: &Path,
    seed: u64,
) -> Result<Outcome, String> {
    let specs = registry();
    let spec = specs
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| format!("unknown experiment '{name}'"))?;
    std::fs::create_dir_all(out_dir).map_err(|e| e.to_string())?;
    let ctx = RunContext {
        out_dir: out_dir.to_path_buf(),
        seed,
        tolerances: Tolerances::default(),
        calibration: Calibration::default(),
    };
    // merge user params over the defaults so partial configs validate
    let mut merged = (spec.default_params)();
    merge_json(&mut merged, &params);
    let mut outcome = (spec.run)(&ctx, &merged).map_err(|e| e.to_string())?;

    let table = ctx.path("checks.csv");
    {
        let mut w = std::fs::File::create(&table).map_err(|e| e.to_string())?;
        use std::io::Write;
        writeln!(w, "check,pass,detail").map_err(|e| e.to_string())?;
        for c in &outcome.checks {
            writeln!(w, "{},{},{}", c.name, c.pass, c.detail.replace(',', ";"))
                .map_err(|e| e.to_string())?;
        }
    }
    outcome.files.push(PathBuf::from("checks.csv"));
    manifest::write_manifest(&ctx, spec.name, &merged, &outcome).map_err(|e| e.to_string())?;
    Ok(outcome)
}

fn merge_json(base: &mut serde_json::Value, over: &serde_json::Value) {
    match (base, over) {
        (serde_json::Value::Object(b), serde_json::Value::Object(o)) => {
            for (k, v) in o {
                match b.get_mut(k) {
                    Some(slot) => merge_json(slot, v),
                    None => {
                        b.insert(k.clone(), v.clone());
                    }
                }
            }
        }
        (b, o) => *b = o.clone(),
    }
}
