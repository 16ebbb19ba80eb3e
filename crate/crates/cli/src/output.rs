//! Shared formatting and file output.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde_json::Value;

/// What a finished command reports back to `main`.
#[derive(Debug, Default)]
pub struct Outcome {
    pub anomalies: Vec<String>,
}

/// Scientific notation with five significant digits.
pub fn lr_text(lr: f64) -> String {
    format!("{lr:.4e}")
}

pub fn write_file(dir: &Path, name: &str, contents: &[u8]) -> Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

/// Flattens nested objects into dotted keys; arrays get numeric segments.
pub fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&key(k), v, out);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), v, out);
            }
        }
        Value::Null => out.push((prefix.to_string(), String::new())),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

/// A header row and one value row.
pub fn record_csv(v: &Value) -> Result<String> {
    let mut cells = Vec::new();
    flatten("", v, &mut cells);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(cells.iter().map(|(k, _)| k))?;
    w.write_record(cells.iter().map(|(_, v)| v))?;
    Ok(String::from_utf8(w.into_inner()?)?)
}
