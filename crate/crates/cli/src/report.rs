//! Flattens a run-record log into a CSV or JSON table for external plotting.

use crate::exec::RunRecord;
use cliquelab::error::{Error, Result};
use serde_json::Value;
use std::collections::BTreeSet;

pub enum ReportFormat {
    Csv,
    Json,
}

pub struct ReportTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub skipped: usize,
}

const BASE_COLUMNS: [&str; 7] = [
    "command",
    "seed",
    "pass",
    "config_hash",
    "artifact_version",
    "started_at",
    "finished_at",
];

/// Parses the log, skipping corrupt lines (counted, not fatal). Columns are
/// the fixed base fields followed by the sorted union of flattened result
/// keys, so the order is stable across runs.
pub fn build_table(log_text: &str) -> ReportTable {
    let mut records = Vec::new();
    let mut skipped = 0;
    for line in log_text.lines() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<RunRecord>(line) {
            Ok(r) => records.push(r),
            Err(_) => skipped += 1,
        }
    }
    let mut result_keys: BTreeSet<String> = BTreeSet::new();
    let flattened: Vec<Vec<(String, String)>> = records
        .iter()
        .map(|r| {
            let mut pairs = Vec::new();
            flatten_value("result", &r.result, &mut pairs);
            for (k, _) in &pairs {
                result_keys.insert(k.clone());
            }
            pairs
        })
        .collect();
    let mut columns: Vec<String> = BASE_COLUMNS.iter().map(|s| s.to_string()).collect();
    columns.extend(result_keys.iter().cloned());
    let rows = records
        .iter()
        .zip(&flattened)
        .map(|(r, pairs)| {
            let mut row = vec![
                r.command.clone(),
                r.seed.to_string(),
                r.pass.to_string(),
                r.config_hash.clone(),
                r.artifact_version.clone(),
                r.started_at.clone(),
                r.finished_at.clone(),
            ];
            for key in &result_keys {
                let cell = pairs
                    .iter()
                    .find(|(k, _)| k == key)
                    .map(|(_, v)| v.clone())
                    .unwrap_or_default();
                row.push(cell);
            }
            row
        })
        .collect();
    ReportTable {
        columns,
        rows,
        skipped,
    }
}

/// Scalars keep their display form; arrays and objects become compact JSON,
/// except that objects one level below the result root are descended into.
fn flatten_value(prefix: &str, value: &Value, out: &mut Vec<(String, String)>) {
    match value {
        Value::Object(map) if prefix == "result" => {
            for (k, v) in map {
                flatten_value(&format!("{prefix}.{k}"), v, out);
            }
        }
        Value::Null => out.push((prefix.to_string(), String::new())),
        Value::Bool(b) => out.push((prefix.to_string(), b.to_string())),
        Value::Number(n) => out.push((prefix.to_string(), n.to_string())),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

pub fn render(table: &ReportTable, format: &ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Csv => {
            let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
            w.write_record(&table.columns)
                .and_then(|_| table.rows.iter().try_for_each(|r| w.write_record(r)))
                .map_err(|e| Error::InvalidParameter(format!("csv write failed: {e}")))?;
            let bytes = w
                .into_inner()
                .map_err(|e| Error::InvalidParameter(format!("csv flush failed: {e}")))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf8"))
        }
        ReportFormat::Json => {
            let rows: Vec<serde_json::Map<String, Value>> = table
                .rows
                .iter()
                .map(|row| {
                    table
                        .columns
                        .iter()
                        .cloned()
                        .zip(row.iter().map(|cell| Value::String(cell.clone())))
                        .collect()
                })
                .collect();
            Ok(serde_json::to_string_pretty(&rows).expect("rows serialize"))
        }
    }
}
