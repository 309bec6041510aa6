//! Machine-readable reports. Key order follows field order, so output is
//! byte-stable apart from the `timings` block.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    /// Where the expected value comes from.
    pub oracle: String,
    pub expected: Value,
    pub got: Value,
    pub tolerance: Value,
    pub pass: bool,
}

impl Check {
    pub fn new(name: &str, oracle: &str, expected: impl Serialize, got: impl Serialize, tolerance: impl Serialize, pass: bool) -> Self {
        Self {
            name: name.to_string(),
            oracle: oracle.to_string(),
            expected: serde_json::to_value(expected).unwrap_or(Value::Null),
            got: serde_json::to_value(got).unwrap_or(Value::Null),
            tolerance: serde_json::to_value(tolerance).unwrap_or(Value::Null),
            pass,
        }
    }

    /// `|got - expected| <= tol * max(1, |expected|)`.
    pub fn close(name: &str, oracle: &str, expected: f64, got: f64, tol: f64) -> Self {
        let pass = (got - expected).abs() <= tol * expected.abs().max(1.0);
        Self::new(name, oracle, expected, got, tol, pass)
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub config: Value,
    pub checks: Vec<Check>,
    pub data: Value,
    pub timings: BTreeMap<String, f64>,
}

impl Report {
    pub fn new(command: &str, config: &impl Serialize) -> Self {
        Self {
            command: command.to_string(),
            config: serde_json::to_value(config).unwrap_or(Value::Null),
            checks: Vec::new(),
            data: Value::Null,
            timings: BTreeMap::new(),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn time<T>(&mut self, label: &str, f: impl FnOnce() -> T) -> T {
        let start = std::time::Instant::now();
        let out = f();
        self.timings.insert(label.to_string(), start.elapsed().as_secs_f64());
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let path = dir.join(format!("{}.json", self.command));
        std::fs::write(&path, self.to_json()).with_context(|| format!("writing {}", path.display()))
    }
}

/// Writes comma-separated rows with a header line and LF endings.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}
