//! Machine-readable run reports.
//!
//! Exact rationals are rendered `p/q` in lowest terms; approximate values
//! carry 12 significant digits and live in a separate `approx` section so
//! proof-grade numbers are never confused with illustrative ones. Reports
//! are byte-stable across runs for fixed inputs and `--workers 1`; timing
//! is included only on request since it varies between runs.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use prgames::Ratio;
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Serialize)]
pub struct RunReport {
    pub subcommand: String,
    pub inputs_digest: String,
    pub verdict: String,
    /// exact values, rendered p/q
    pub values: BTreeMap<String, String>,
    /// floating-point values, 12 significant digits
    pub approx: BTreeMap<String, String>,
    pub details: Vec<String>,
    pub workers: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl RunReport {
    pub fn new(subcommand: impl Into<String>) -> Self {
        RunReport {
            subcommand: subcommand.into(),
            inputs_digest: String::new(),
            verdict: String::new(),
            values: BTreeMap::new(),
            approx: BTreeMap::new(),
            details: Vec::new(),
            workers: 1,
            timing_ms: None,
        }
    }

    pub fn digest(&mut self, parts: &[&str]) {
        let mut h = Sha256::new();
        for p in parts {
            h.update((p.len() as u64).to_le_bytes());
            h.update(p.as_bytes());
        }
        self.inputs_digest = hex(&h.finalize());
    }

    pub fn value_ratio(&mut self, key: &str, r: &Ratio) {
        self.values.insert(key.to_string(), format_ratio(r));
    }

    pub fn value(&mut self, key: &str, v: impl ToString) {
        self.values.insert(key.to_string(), v.to_string());
    }

    pub fn approx(&mut self, key: &str, v: f64) {
        self.approx.insert(key.to_string(), format!("{v:.12e}"));
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Text => {
                let mut out = String::new();
                let _ = writeln!(out, "subcommand: {}", self.subcommand);
                let _ = writeln!(out, "inputs: sha256:{}", self.inputs_digest);
                let _ = writeln!(out, "verdict: {}", self.verdict);
                for (k, v) in &self.values {
                    let _ = writeln!(out, "{k} = {v}");
                }
                for (k, v) in &self.approx {
                    let _ = writeln!(out, "{k} ~ {v} (approx)");
                }
                for d in &self.details {
                    let _ = writeln!(out, "{d}");
                }
                let _ = writeln!(out, "workers: {}", self.workers);
                if let Some(ms) = self.timing_ms {
                    let _ = writeln!(out, "timing_ms: {ms}");
                }
                out
            }
        }
    }
}

pub fn format_ratio(r: &Ratio) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
