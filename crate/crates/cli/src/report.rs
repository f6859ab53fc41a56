use std::process::ExitCode;

use serde_json::{json, Map, Value};

/// Process exit statuses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    /// Refuted, not found, or a check failed.
    Negative = 1,
    /// Distinguished by an invariant.
    Distinguished = 2,
    Usage = 64,
    Data = 65,
}

impl From<Exit> for ExitCode {
    fn from(e: Exit) -> Self {
        ExitCode::from(e as u8)
    }
}

/// Machine-readable record of one invocation. Contains no timing, so
/// stdout is byte-identical across runs with the same inputs.
#[derive(Debug)]
pub struct RunReport {
    command: String,
    inputs: Vec<Value>,
    outputs: Vec<Value>,
    tolerance: Option<f64>,
    verdict: Map<String, Value>,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        Self { command: command.into(), inputs: Vec::new(), outputs: Vec::new(), tolerance: None, verdict: Map::new() }
    }

    pub fn input(&mut self, role: &str, path: &str, sha256: &str) {
        self.inputs.push(json!({ "role": role, "path": path, "sha256": sha256 }));
    }

    pub fn output(&mut self, path: &str, sha256: &str) {
        self.outputs.push(json!({ "path": path, "sha256": sha256 }));
    }

    pub fn tolerance(&mut self, tol: f64) {
        self.tolerance = Some(tol);
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.verdict.insert(key.into(), value);
    }

    pub fn to_json(&self) -> Value {
        let mut out = Map::new();
        out.insert("schema".into(), Value::String(shiftcalc::json::SCHEMA.into()));
        out.insert("command".into(), Value::String(self.command.clone()));
        out.insert("inputs".into(), Value::Array(self.inputs.clone()));
        if !self.outputs.is_empty() {
            out.insert("outputs".into(), Value::Array(self.outputs.clone()));
        }
        if let Some(tol) = self.tolerance {
            out.insert("tolerance".into(), json!(tol));
        }
        out.insert("verdict".into(), Value::Object(self.verdict.clone()));
        Value::Object(out)
    }
}
