//! The report the CLI prints and optionally writes with `--out`: a plain-text
//! table followed by a machine-readable JSON block.  Rendering is fully
//! deterministic — two runs with the same inputs produce identical bytes.

use parcross::report::Report;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fmt::Write as _;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckLine {
    pub name: String,
    pub defect: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportFile {
    pub command: String,
    pub tool_version: String,
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub inputs_digest: String,
    pub checks: Vec<CheckLine>,
    pub notes: Vec<String>,
    pub verdict: String,
}

impl ReportFile {
    pub fn from_report(
        command: impl Into<String>,
        tolerance: f64,
        seed: Option<u64>,
        inputs_digest: String,
        report: &Report,
        notes: Vec<String>,
    ) -> ReportFile {
        let checks: Vec<CheckLine> = report
            .checks
            .iter()
            .map(|c| CheckLine {
                name: c.name.clone(),
                defect: c.defect,
                threshold: c.threshold,
                pass: c.passed(),
            })
            .collect();
        let verdict = if checks.iter().all(|c| c.pass) { "PASS" } else { "FAIL" };
        ReportFile {
            command: command.into(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            tolerance,
            seed,
            inputs_digest,
            checks,
            notes,
            verdict: verdict.to_string(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == "PASS"
    }

    /// The aligned plain-text table.
    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "parcross {}", self.tool_version);
        let _ = writeln!(s, "command   : {}", self.command);
        let _ = writeln!(s, "tolerance : {:e}", self.tolerance);
        if let Some(seed) = self.seed {
            let _ = writeln!(s, "seed      : {seed}");
        }
        let _ = writeln!(s, "inputs    : sha256:{}", self.inputs_digest);
        s.push('\n');
        if !self.checks.is_empty() {
            let name_w = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(5).max(5);
            let _ = writeln!(s, "{:<name_w$}  {:>13}  {:>10}  status", "check", "defect", "threshold");
            let _ = writeln!(s, "{}", "-".repeat(name_w + 13 + 10 + 12));
            for c in &self.checks {
                let _ = writeln!(
                    s,
                    "{:<name_w$}  {:>13.6e}  {:>10.1e}  {}",
                    c.name,
                    c.defect,
                    c.threshold,
                    if c.pass { "pass" } else { "FAIL" }
                );
            }
            s.push('\n');
        }
        if !self.notes.is_empty() {
            let _ = writeln!(s, "notes:");
            for n in &self.notes {
                let _ = writeln!(s, "  {n}");
            }
            s.push('\n');
        }
        let _ = writeln!(s, "verdict: {}", self.verdict);
        s
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report always serializes");
        s.push('\n');
        s
    }

    /// Text table plus the JSON block, as printed to stdout.
    pub fn render_full(&self) -> String {
        format!("{}\n--- report json ---\n{}", self.render_text(), self.to_json())
    }
}

/// SHA-256 over the input file bytes and the canonical argument string, so a
/// report pins down exactly what was checked.
pub fn inputs_digest(file_bytes: &[u8], args: &str) -> String {
    let mut h = Sha256::new();
    h.update(file_bytes);
    h.update([0u8]);
    h.update(args.as_bytes());
    format!("{:x}", h.finalize())
}
