use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Serialize;

use super::config::SuiteConfig;
use crate::error::Result;

/// Acceptance rule for one measured value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Bound {
    /// Pass iff `value ≤ tolerance`.
    Upper { tolerance: f64 },
    /// Pass iff `value > threshold`; used for negative controls.
    Lower { threshold: f64 },
    /// Pass iff `lo ≤ value ≤ hi`; used for convergence ratios.
    Range { lo: f64, hi: f64 },
}

impl Bound {
    pub fn admits(&self, value: f64) -> bool {
        match *self {
            Bound::Upper { tolerance } => value <= tolerance,
            Bound::Lower { threshold } => value > threshold,
            Bound::Range { lo, hi } => (lo..=hi).contains(&value),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    /// The identity or property being measured, in words.
    pub identity: String,
    pub value: f64,
    pub bound: Bound,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub passed: bool,
    pub seed: u64,
    pub config_hash: String,
    pub checks: Vec<CheckResult>,
    /// Free-form findings, such as which cocycle variant passed.
    pub notes: BTreeMap<String, String>,
}

impl SuiteReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport<'a> {
    pub version: &'static str,
    pub seed: u64,
    pub config_hash: String,
    pub config: &'a SuiteConfig,
    pub suites: &'a [SuiteReport],
}

impl<'a> RunReport<'a> {
    pub fn new(config: &'a SuiteConfig, suites: &'a [SuiteReport]) -> Self {
        Self {
            version: env!("CARGO_PKG_VERSION"),
            seed: config.seed,
            config_hash: config.hash(),
            config,
            suites,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Writes `report.json`; wall times go to `timings.json` so the report itself
/// stays byte-identical across runs.
pub fn emit_report(
    dir: &Path,
    config: &SuiteConfig,
    suites: &[SuiteReport],
    timings: &BTreeMap<String, f64>,
) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("report.json"), RunReport::new(config, suites).to_json())?;
    let mut t = serde_json::to_string_pretty(timings).expect("timings serialize");
    t.push('\n');
    fs::write(dir.join("timings.json"), t)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds() {
        assert!(Bound::Upper { tolerance: 0.0 }.admits(0.0));
        assert!(!Bound::Upper { tolerance: 0.0 }.admits(1e-300));
        assert!(!Bound::Upper { tolerance: 1.0 }.admits(f64::NAN));
        assert!(Bound::Lower { threshold: 0.1 }.admits(0.2));
        assert!(!Bound::Lower { threshold: 0.1 }.admits(0.1));
        assert!(Bound::Range { lo: 3.2, hi: 4.8 }.admits(4.0));
        assert!(!Bound::Range { lo: 3.2, hi: 4.8 }.admits(f64::NAN));
    }

    #[test]
    fn empty_report_is_valid_json() {
        let cfg = SuiteConfig::default();
        let json = RunReport::new(&cfg, &[]).to_json();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["suites"], serde_json::json!([]));
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys.len(), 5);
        let first = json.lines().nth(1).unwrap();
        assert!(first.contains("\"version\""));
    }

    #[test]
    fn emit_writes_both_files() {
        let dir = std::env::temp_dir().join(format!("galgauge-report-{}", std::process::id()));
        let cfg = SuiteConfig::default();
        emit_report(&dir, &cfg, &[], &BTreeMap::from([("group".to_string(), 0.5)])).unwrap();
        assert!(dir.join("report.json").exists() && dir.join("timings.json").exists());
        fs::remove_dir_all(dir).unwrap();
    }
}
