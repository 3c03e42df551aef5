//! Structured verification reports: one record per check, with the claim,
//! an input digest, a verdict, and witness data.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    /// Statement of the verified claim.
    pub claim: String,
    pub inputs_digest: String,
    pub verdict: Verdict,
    pub witness: serde_json::Value,
    pub wall_ms: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub example: String,
    pub prime: u64,
    pub branches: String,
    pub op_prime: u64,
    pub checks: Vec<CheckRecord>,
    pub overall: Verdict,
}

pub const REPORT_SCHEMA: u32 = 1;

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.overall == Verdict::Pass
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable report");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let mark = match c.verdict {
                Verdict::Pass => "PASS",
                Verdict::Fail => "FAIL",
            };
            out.push_str(&format!("{mark}  {:<38} {} ({} ms)\n", c.name, c.claim, c.wall_ms));
            if c.verdict == Verdict::Fail {
                out.push_str(&format!("      witness: {}\n", c.witness));
            }
        }
        let overall = if self.passed() { "PASS" } else { "FAIL" };
        out.push_str(&format!(
            "{overall}: {}/{} checks passed\n",
            self.checks.iter().filter(|c| c.verdict == Verdict::Pass).count(),
            self.checks.len()
        ));
        out
    }

    /// Identical reports up to wall times.
    pub fn same_results(&self, other: &VerificationReport) -> bool {
        let strip = |r: &VerificationReport| {
            let mut v = serde_json::to_value(r).unwrap();
            if let Some(checks) = v.get_mut("checks").and_then(|c| c.as_array_mut()) {
                for c in checks {
                    c.as_object_mut().unwrap().remove("wall_ms");
                }
            }
            v
        };
        strip(self) == strip(other)
    }
}

/// Digest of the run inputs: asset sources in registry order plus the
/// numeric configuration.
pub fn inputs_digest(prime: u64, branches: [bool; 3], op_prime: u64) -> String {
    let mut hasher = Sha256::new();
    for name in crate::assets::ASSET_NAMES {
        hasher.update(name.as_bytes());
        hasher.update(crate::assets::builtin_source(name).expect("builtin").as_bytes());
    }
    hasher.update(prime.to_le_bytes());
    hasher.update([branches[0] as u8, branches[1] as u8, branches[2] as u8]);
    hasher.update(op_prime.to_le_bytes());
    hex_string(&hasher.finalize())
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
