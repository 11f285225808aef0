use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::args::Format;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of(path: &str, bytes: &[u8]) -> Self {
        let hash = Sha256::digest(bytes);
        InputDigest {
            path: path.to_string(),
            sha256: hash.iter().map(|b| format!("{b:02x}")).collect(),
        }
    }
}

/// Everything a command produced. Only `timestamp` differs between reruns.
#[derive(Debug, Serialize)]
pub struct RunDocument {
    pub tool: &'static str,
    pub version: &'static str,
    pub input: Option<InputDigest>,
    pub command: Vec<String>,
    pub results: Value,
    pub violations: usize,
    pub error: Option<String>,
    pub exit_status: i32,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

impl RunDocument {
    pub fn new(command: Vec<String>) -> Self {
        RunDocument {
            tool: "flowmech",
            version: env!("CARGO_PKG_VERSION"),
            input: None,
            command,
            results: Value::Null,
            violations: 0,
            error: None,
            exit_status: 0,
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
        }
    }
}

/// Human-readable rendering built alongside the structured results.
#[derive(Debug, Default)]
pub struct Text {
    out: String,
}

impl Text {
    pub fn line(&mut self, line: impl AsRef<str>) {
        self.out.push_str(line.as_ref());
        self.out.push('\n');
    }

    pub fn blank(&mut self) {
        if !self.out.is_empty() && !self.out.ends_with("\n\n") {
            self.out.push('\n');
        }
    }

    pub fn table<S: AsRef<str>>(&mut self, headers: &[&str], rows: &[Vec<S>]) {
        let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
        for row in rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.as_ref().chars().count());
            }
        }
        let render = |cells: Vec<&str>| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{c:<w$}"))
                .collect();
            padded.join("  ").trim_end().to_string()
        };
        self.line(render(headers.to_vec()));
        let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
        self.line(rule.join("  "));
        for row in rows {
            self.line(render(row.iter().map(|c| c.as_ref()).collect()));
        }
    }

    /// Indented `key: value` lines for a JSON value, used for witnesses.
    pub fn fields(&mut self, value: &Value, indent: usize) {
        let pad = " ".repeat(indent);
        match value {
            Value::Object(map) => {
                for (k, v) in map {
                    match v {
                        Value::Object(_) => {
                            self.line(format!("{pad}{k}:"));
                            self.fields(v, indent + 2);
                        }
                        Value::Array(items) if items.iter().any(|i| i.is_object()) => {
                            self.line(format!("{pad}{k}:"));
                            for item in items {
                                self.fields(item, indent + 2);
                            }
                        }
                        _ => self.line(format!("{pad}{k}: {}", scalar(v))),
                    }
                }
            }
            other => self.line(format!("{pad}{}", scalar(other))),
        }
    }

    pub fn into_string(self) -> String {
        self.out
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            format!("[{}]", parts.join(", "))
        }
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

pub fn format_report(doc: &RunDocument, text: &str, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(doc).expect("run documents serialize");
            s.push('\n');
            s
        }
        Format::Table => text.to_string(),
    }
}
