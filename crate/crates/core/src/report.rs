//! Serialized verification reports.
//!
//! A report is deterministic given its configuration: no timestamps, no wall time
//! unless explicitly requested, and rows in a fixed order.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::field::Field;

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// CSV header, in column order.
pub const CSV_COLUMNS: [&str; 8] = ["q", "p", "ell", "d", "quantity", "value", "expected", "pass"];

/// One measured quantity. Field parameters are empty for rows that do not depend on `q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub q: Option<u32>,
    pub p: Option<u32>,
    pub ell: Option<u32>,
    pub d: Option<usize>,
    pub quantity: String,
    pub value: String,
    pub expected: String,
    pub pass: bool,
}

impl Row {
    pub fn new(quantity: impl Into<String>, value: impl ToString, expected: impl ToString, pass: bool) -> Row {
        Row {
            q: None,
            p: None,
            ell: None,
            d: None,
            quantity: quantity.into(),
            value: value.to_string(),
            expected: expected.to_string(),
            pass,
        }
    }

    pub fn on(mut self, field: &Field) -> Row {
        self.q = Some(field.q());
        self.p = Some(field.p());
        self.ell = Some(field.ell());
        self
    }

    pub fn at(self, field: &Field, d: usize) -> Row {
        self.on(field).with_d(d)
    }

    pub fn with_d(mut self, d: usize) -> Row {
        self.d = Some(d);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub artifact_version: String,
    pub command: String,
    pub config: BTreeMap<String, String>,
    pub rows: Vec<Row>,
    /// Command-specific structured output.
    #[serde(skip_serializing_if = "Value::is_null", default)]
    pub details: Value,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_time_s: Option<f64>,
    /// True iff there is at least one row and every row passes.
    pub pass: bool,
}

impl Report {
    pub fn new(command: &str) -> Report {
        Report {
            artifact_version: ARTIFACT_VERSION.into(),
            command: command.into(),
            config: BTreeMap::new(),
            rows: Vec::new(),
            details: Value::Null,
            wall_time_s: None,
            pass: false,
        }
    }

    pub fn config(mut self, key: &str, value: impl ToString) -> Report {
        self.config.insert(key.into(), value.to_string());
        self
    }

    pub fn push(&mut self, row: Row) {
        self.rows.push(row);
        self.pass = self.rows.iter().all(|r| r.pass);
    }

    pub fn extend(&mut self, rows: impl IntoIterator<Item = Row>) {
        for r in rows {
            self.push(r);
        }
    }

    pub fn set_details<T: Serialize>(&mut self, details: &T) -> Result<()> {
        self.details = serde_json::to_value(details).map_err(|e| Error::Contract(format!("details: {e}")))?;
        Ok(())
    }

    /// Concatenates the rows of several reports under one command.
    pub fn merge(command: &str, parts: Vec<Report>) -> Report {
        let mut out = Report::new(command);
        let mut details = Vec::new();
        for part in parts {
            for (k, v) in part.config {
                out.config.entry(k).or_insert(v);
            }
            out.extend(part.rows);
            if !part.details.is_null() {
                details.push(part.details);
            }
        }
        if !details.is_empty() {
            out.details = Value::Array(details);
        }
        out
    }

    pub fn failures(&self) -> Vec<&Row> {
        self.rows.iter().filter(|r| !r.pass).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| Error::Contract(format!("json: {e}")))?;
        s.push('\n');
        Ok(s)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| Error::Contract(format!("csv: {e}"));
        w.write_record(CSV_COLUMNS).map_err(err)?;
        let opt = |v: Option<u32>| v.map(|x| x.to_string()).unwrap_or_default();
        for r in &self.rows {
            w.write_record([
                opt(r.q),
                opt(r.p),
                opt(r.ell),
                r.d.map(|x| x.to_string()).unwrap_or_default(),
                r.quantity.clone(),
                r.value.clone(),
                r.expected.clone(),
                r.pass.to_string(),
            ])
            .map_err(err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Contract(format!("csv: {e}")))?;
        String::from_utf8(bytes).map_err(|e| Error::Contract(format!("csv: {e}")))
    }

    /// Short human-readable summary: failing rows, then the verdict.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        let failures = self.failures();
        for r in &failures {
            let _ = writeln!(
                s,
                "FAIL {} (q={}, d={}): got {}, expected {}",
                r.quantity,
                r.q.map_or("-".into(), |q| q.to_string()),
                r.d.map_or("-".into(), |d| d.to_string()),
                r.value,
                r.expected
            );
        }
        let _ = writeln!(
            s,
            "{}: {} ({} checks, {} failed)",
            self.command,
            if self.pass { "PASS" } else { "FAIL" },
            self.rows.len(),
            failures.len()
        );
        s
    }
}
