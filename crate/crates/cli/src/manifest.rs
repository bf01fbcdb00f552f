//! Run manifests written next to every output.

use std::path::Path;

use serde_json::{json, Value};
use su_interferometry::verify::{CheckOutcome, Measurement};

use crate::error::{CliError, CliResult};

fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(su_interferometry::table::format_num(x))
    }
}

fn measurement(m: &Measurement) -> Value {
    json!({
        "label": m.label,
        "observed": num(m.observed),
        "relation": m.relation.to_string(),
        "bound": num(m.bound),
        "location": m.location,
        "passed": m.passed(),
    })
}

fn check(c: &CheckOutcome) -> Value {
    json!({
        "id": c.id,
        "summary": c.summary,
        "passed": c.passed(),
        "max_deviation": c.worst().map(measurement),
        "measurements": c.measurements.iter().map(measurement).collect::<Vec<_>>(),
    })
}

#[derive(Debug, Clone)]
pub struct RunManifest {
    pub command: String,
    pub config: Vec<(String, String)>,
    pub outputs: Vec<String>,
    pub checks: Vec<CheckOutcome>,
}

impl RunManifest {
    pub fn new(command: impl Into<String>, config: Vec<(String, String)>) -> Self {
        RunManifest {
            command: command.into(),
            config,
            outputs: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "artifact": env!("CARGO_PKG_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
            "timestamp": chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            "command": self.command,
            "config": self.config.iter().map(|(k, v)| json!({ "key": k, "value": v })).collect::<Vec<_>>(),
            "outputs": self.outputs,
            "checks": self.checks.iter().map(check).collect::<Vec<_>>(),
            "passed": self.passed(),
        })
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        let text = serde_json::to_string_pretty(&self.to_json()).expect("manifest serializes");
        std::fs::write(path, text + "\n").map_err(|source| CliError::Write {
            path: path.to_path_buf(),
            source,
        })
    }
}
