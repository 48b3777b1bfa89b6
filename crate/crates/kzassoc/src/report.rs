//! The single JSON report written by every run.

use std::collections::BTreeMap;
use std::io;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::cache::CacheStats;
use crate::config::RunConfig;

/// Process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    NonConvergence,
    Precondition,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
            Outcome::NonConvergence => 2,
            Outcome::Precondition => 3,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub version: String,
    pub config: RunConfig,
    pub results: Value,
    pub passed: bool,
    pub outcome: Outcome,
    pub exit_code: i32,
    /// Wall-clock milliseconds per stage. Not part of [`RunReport::body`].
    pub timings_ms: BTreeMap<String, f64>,
    /// Not part of [`RunReport::body`].
    pub cache: Option<CacheStats>,
}

impl RunReport {
    pub fn new(command: &str, config: RunConfig, results: Value, outcome: Outcome) -> Self {
        RunReport {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            results,
            passed: outcome == Outcome::Pass,
            outcome,
            exit_code: outcome.exit_code(),
            timings_ms: BTreeMap::new(),
            cache: None,
        }
    }

    /// Everything that is a function of the configuration and code version alone.
    pub fn body(&self) -> Value {
        body_of(serde_json::to_value(self).expect("report is serializable"))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }

    pub fn write_to(&self, path: &Path) -> io::Result<()> {
        std::fs::write(path, self.to_json() + "\n")
    }
}

/// Strips the run-dependent fields from a parsed report.
pub fn body_of(mut report: Value) -> Value {
    if let Value::Object(map) = &mut report {
        map.remove("timings_ms");
        map.remove("cache");
    }
    report
}
