//! Run manifests: inputs echo, tolerance tables, and content hashes of every
//! artifact, so re-runs are byte-auditable.

use crate::{Outcome, RunContext};
use sha2::{Digest, Sha256};
use std::io::Write;

pub fn write_manifest(
    ctx: &RunContext,
    name: &str,
    params: &serde_json::Value,
    outcome: &Outcome,
) -> std::io::Result<()> {
    let mut outputs = Vec::new();
    for rel in &outcome.files {
        let full = ctx.out_dir.join(rel);
        let bytes = std::fs::read(&full)?;
        let mut hasher = Sha256::new();
        hasher.update(&bytes);
        let digest = hasher.finalize();
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        outputs.push(serde_json::json!({
            "file": rel.to_string_lossy(),
            "sha256": hex,
            "bytes": bytes.len(),
        }));
    }
    let manifest = serde_json::json!({
        "experiment": name,
        "version": env!("CARGO_PKG_VERSION"),
        "seed": ctx.seed,
        "params": params,
        "tolerances": ctx.tolerances,
        "calibration": ctx.calibration,
        "pass": outcome.passed(),
        "checks": outcome.checks,
        "outputs": outputs,
    });
    let mut f = std::fs::File::create(ctx.path("manifest.json"))?;
    writeln!(f, "{}", serde_json::to_string_pretty(&manifest)?)?;
    Ok(())
}
