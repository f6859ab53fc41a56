use std::fs;
use std::path::Path;

use serde_json::Value;
use sha2::{Digest, Sha256};
use shiftcalc::json;
use shiftcalc::{IntMatrix, SEWitness};

use crate::report::RunReport;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Data { path: String, source: shiftcalc::Error },
    #[error(transparent)]
    Core(#[from] shiftcalc::Error),
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn display(path: &Path) -> String {
    path.display().to_string()
}

/// Reads a JSON input and records its digest under `role`.
pub fn read_json(path: &Path, role: &str, report: &mut RunReport) -> Result<Value, CliError> {
    let name = display(path);
    let bytes = fs::read(path).map_err(|source| CliError::Io { path: name.clone(), source })?;
    report.input(role, &name, &sha256_hex(&bytes));
    let text = String::from_utf8(bytes)
        .map_err(|_| CliError::Data { path: name.clone(), source: shiftcalc::Error::Parse("not UTF-8".into()) })?;
    json::parse_text(&text).map_err(|source| CliError::Data { path: name, source })
}

/// Wraps a core error with the file it came from.
pub fn in_file<T>(path: &Path, r: shiftcalc::Result<T>) -> Result<T, CliError> {
    r.map_err(|source| CliError::Data { path: display(path), source })
}

/// Exact nonnegative matrix from a `{"rows", "cols", "entries"}` file.
pub fn parse_matrix_file(path: &Path, role: &str, report: &mut RunReport) -> Result<IntMatrix, CliError> {
    let value = read_json(path, role, report)?;
    let m: IntMatrix = in_file(path, json::matrix_from_json(&value, role))?;
    in_file(path, m.require_nonnegative(role))?;
    Ok(m)
}

pub fn read_witness(path: &Path, report: &mut RunReport) -> Result<SEWitness, CliError> {
    let value = read_json(path, "witness", report)?;
    in_file(path, json::witness_from_json(&value))
}

pub fn write_json(path: &Path, value: &Value, report: &mut RunReport) -> Result<(), CliError> {
    let text = json::to_pretty(value);
    let name = display(path);
    fs::write(path, text.as_bytes()).map_err(|source| CliError::Io { path: name.clone(), source })?;
    report.output(&name, &sha256_hex(text.as_bytes()));
    Ok(())
}
