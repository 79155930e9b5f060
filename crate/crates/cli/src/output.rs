use std::fs;
use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

/// Floats in text and CSV: 17 significant digits.
pub fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

/// What a command produced, in each representation.
pub struct Output {
    pub command: &'static str,
    pub json: Value,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub text: String,
}

impl Output {
    pub fn new(command: &'static str, json: Value) -> Self {
        Output {
            command,
            json,
            header: Vec::new(),
            rows: Vec::new(),
            text: String::new(),
        }
    }

    pub fn table(mut self, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        self.header = header.iter().map(|s| s.to_string()).collect();
        self.rows = rows;
        self
    }

    pub fn text(mut self, text: String) -> Self {
        self.text = text;
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut map = Map::new();
                map.insert("schema_version".into(), json!(SCHEMA_VERSION));
                map.insert("command".into(), json!(self.command));
                match &self.json {
                    Value::Object(m) => map.extend(m.clone()),
                    other => {
                        map.insert("result".into(), other.clone());
                    }
                }
                let mut s = serde_json::to_string_pretty(&Value::Object(map)).expect("serializable");
                s.push('\n');
                s
            }
            Format::Csv => {
                let (header, rows) = if self.header.is_empty() {
                    scalar_rows(&self.json)
                } else {
                    (self.header.clone(), self.rows.clone())
                };
                let mut s = header.join(",");
                s.push('\n');
                for r in rows {
                    s.push_str(&r.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(","));
                    s.push('\n');
                }
                s
            }
            Format::Text => {
                if self.text.is_empty() {
                    let (_, rows) = scalar_rows(&self.json);
                    rows.iter().map(|r| format!("{}: {}\n", r[0], r[1])).collect()
                } else {
                    self.text.clone()
                }
            }
        }
    }

    pub fn emit(&self, format: Format, out: Option<&Path>) -> std::io::Result<()> {
        let s = self.render(format);
        match out {
            Some(p) => fs::write(p, s),
            None => std::io::stdout().write_all(s.as_bytes()),
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// `key,value` rows for the scalar fields of a JSON object, flattened with `.`.
fn scalar_rows(v: &Value) -> (Vec<String>, Vec<Vec<String>>) {
    let mut rows = Vec::new();
    flatten("", v, &mut rows);
    (vec!["key".into(), "value".into()], rows)
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<Vec<String>>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, rows);
            }
        }
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let joined = a.iter().map(scalar_text).collect::<Vec<_>>().join(";");
            rows.push(vec![prefix.to_string(), joined]);
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), x, rows);
            }
        }
        other => rows.push(vec![prefix.to_string(), scalar_text(other)]),
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::Number(n) if n.is_f64() => fmt_f(n.as_f64().unwrap_or(f64::NAN)),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
