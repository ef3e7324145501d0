//! The JSON document written by every command.

use std::collections::BTreeMap;

use ratdyn_core::dynsys::DynamicalSystem;
use ratdyn_core::invsearch::SearchBudget;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::CliError;
use crate::sysfile::SystemFile;

pub const SCHEMA: &str = "ratdyn-report/1";

#[derive(Clone, Debug, Serialize)]
pub struct CommandEcho {
    pub name: String,
    pub args: BTreeMap<String, Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SystemInfo {
    pub name: String,
    pub variables: Vec<String>,
    /// Normalized coordinates.
    pub map: Vec<String>,
    pub fingerprint: String,
}

impl SystemInfo {
    pub fn new(file: &SystemFile, sys: &DynamicalSystem) -> Self {
        SystemInfo {
            name: file.name.clone(),
            variables: file.variables.clone(),
            map: sys.coords().iter().map(|c| c.to_string()).collect(),
            fingerprint: fingerprint(sys),
        }
    }
}

/// SHA-256 of the variable list and normalized coordinates. Systems that
/// normalize to the same coordinates share a fingerprint whatever their source text.
pub fn fingerprint(sys: &DynamicalSystem) -> String {
    let mut h = Sha256::new();
    h.update(b"ratdyn-system/1\n");
    h.update(sys.vars().names().join(",").as_bytes());
    for c in sys.coords() {
        h.update(b"\n");
        h.update(c.to_string().as_bytes());
    }
    hex::encode(h.finalize())
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportDocument {
    pub schema: &'static str,
    pub command: CommandEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub system: Option<SystemInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<SearchBudget>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub result: Value,
    /// Wall-clock time of the computation. The only field that varies between runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

#[derive(Serialize)]
struct ErrorDocument<'a> {
    schema: &'static str,
    error: &'a CliError,
}

pub fn error_json(e: &CliError) -> String {
    serde_json::to_string(&ErrorDocument {
        schema: SCHEMA,
        error: e,
    })
    .expect("serializable")
}

impl ReportDocument {
    pub fn to_json(&self, pretty: bool) -> String {
        if pretty {
            serde_json::to_string_pretty(self)
        } else {
            serde_json::to_string(self)
        }
        .expect("serializable")
    }

    /// Two-column text rendering for `--pretty`.
    pub fn to_table(&self) -> String {
        let mut rows: Vec<(String, String)> = vec![("command".into(), self.command.name.clone())];
        if let Some(s) = &self.system {
            rows.push(("system".into(), s.name.clone()));
            rows.push(("variables".into(), s.variables.join(", ")));
            for (v, c) in s.variables.iter().zip(&s.map) {
                rows.push((format!("  {v} ->"), c.clone()));
            }
            rows.push(("fingerprint".into(), s.fingerprint.clone()));
        }
        if let Some(b) = &self.budget {
            rows.push((
                "budget".into(),
                format!(
                    "{},{},{},{}",
                    b.max_num_degree, b.max_den_degree, b.denominator_catalog_depth, b.nullspace_rank1_limit
                ),
            ));
        }
        if let Some(s) = self.seed {
            rows.push(("seed".into(), s.to_string()));
        }
        flatten("", &self.result, &mut rows);
        if let Some(t) = self.timing_ms {
            rows.push(("timing_ms".into(), t.to_string()));
        }
        let w = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in rows {
            out.push_str(&format!("{k:<w$}  {v}\n"));
        }
        out
    }
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, x, rows);
            }
        }
        Value::Array(xs) if xs.iter().all(Value::is_string) && !xs.is_empty() => {
            for (i, x) in xs.iter().enumerate() {
                rows.push((format!("{prefix}[{i}]"), x.as_str().unwrap_or_default().to_string()));
            }
        }
        Value::String(s) => rows.push((prefix.to_string(), s.clone())),
        other => rows.push((prefix.to_string(), other.to_string())),
    }
}
