//! Helpers shared by the integration-test targets: locating the binary and
//! fixtures, running it, and validating reports against the shipped schema.
#![allow(dead_code)]

use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_prepotentials"))
}

pub fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn fixture(name: &str) -> PathBuf {
    manifest_dir().join("tests/scenarios").join(name)
}

pub fn catalog_file(name: &str) -> PathBuf {
    manifest_dir().join("../prepotentials/catalog").join(name)
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

pub fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

/// Minimal JSON-schema checker covering the subset the shipped schema uses:
/// type, required, properties, additionalProperties: false, items, minimum.
pub fn validate(value: &Value, schema: &Value, path: &str) -> Result<(), String> {
    if let Some(ty) = schema.get("type").and_then(Value::as_str) {
        let ok = match ty {
            "object" => value.is_object(),
            "array" => value.is_array(),
            "string" => value.is_string(),
            "boolean" => value.is_boolean(),
            "integer" => value.as_i64().is_some() || value.as_u64().is_some(),
            "number" => value.is_number(),
            other => return Err(format!("{path}: unsupported schema type {other}")),
        };
        if !ok {
            return Err(format!("{path}: expected {ty}, got {value}"));
        }
    }
    if let Some(minimum) = schema.get("minimum").and_then(Value::as_f64) {
        let v = value.as_f64().ok_or_else(|| format!("{path}: not numeric"))?;
        if v < minimum {
            return Err(format!("{path}: {v} < minimum {minimum}"));
        }
    }
    if let Some(required) = schema.get("required").and_then(Value::as_array) {
        let obj = value.as_object().ok_or_else(|| format!("{path}: not object"))?;
        for key in required {
            let key = key.as_str().unwrap();
            if !obj.contains_key(key) {
                return Err(format!("{path}: missing required key {key}"));
            }
        }
    }
    if let Some(props) = schema.get("properties").and_then(Value::as_object) {
        let obj = value.as_object().ok_or_else(|| format!("{path}: not object"))?;
        for (key, sub) in props {
            if let Some(v) = obj.get(key) {
                validate(v, sub, &format!("{path}.{key}"))?;
            }
        }
        if schema.get("additionalProperties") == Some(&Value::Bool(false)) {
            for key in obj.keys() {
                if !props.contains_key(key) {
                    return Err(format!("{path}: unexpected key {key}"));
                }
            }
        }
    }
    if let Some(items) = schema.get("items") {
        if let Some(arr) = value.as_array() {
            for (i, v) in arr.iter().enumerate() {
                validate(v, items, &format!("{path}[{i}]"))?;
            }
        }
    }
    Ok(())
}

pub fn shipped_schema() -> Value {
    let path = manifest_dir().join("../../schema/report.schema.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

pub fn assert_schema_valid(json_text: &str) -> Value {
    let value: Value = serde_json::from_str(json_text).expect("well-formed JSON");
    validate(&value, &shipped_schema(), "$").expect("schema-valid report");
    value
}

pub fn strip_runtime(text: &str) -> String {
    text.lines()
        .filter(|l| !l.contains("runtime_seconds"))
        .collect::<Vec<_>>()
        .join("\n")
}
