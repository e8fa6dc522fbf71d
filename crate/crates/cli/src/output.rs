use std::io::Write;

use serde_json::{json, Map, Value};

use crate::config::{Format, Settings};
use crate::error::CliError;

/// Result of one subcommand, renderable as text, JSON or CSV.
pub struct Report {
    pub op: &'static str,
    pub params: Value,
    pub results: Vec<Map<String, Value>>,
    pub text: Vec<String>,
    pub default_format: Format,
}

impl Report {
    pub fn new(op: &'static str, params: Value, default_format: Format) -> Self {
        Self { op, params, results: Vec::new(), text: Vec::new(), default_format }
    }

    pub fn row(&mut self, v: Value) {
        match v {
            Value::Object(m) => self.results.push(m),
            other => {
                let mut m = Map::new();
                m.insert("value".into(), other);
                self.results.push(m);
            }
        }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.text.push(s.into());
    }

    pub fn render(&self, settings: &Settings) -> String {
        match settings.format.unwrap_or(self.default_format) {
            Format::Text => {
                let mut s = self.text.join("\n");
                s.push('\n');
                s
            }
            Format::Json => {
                let mut params = self.params.clone();
                if let Value::Object(m) = &mut params {
                    m.insert("settings".into(), serde_json::to_value(settings).expect("settings serialize"));
                }
                let doc = json!({
                    "op": self.op,
                    "params": params,
                    "results": self.results,
                    "seed": settings.seed,
                    "version": env!("CARGO_PKG_VERSION"),
                });
                let mut s = serde_json::to_string_pretty(&doc).expect("json serialize");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut s = String::new();
                for line in self.text.iter().filter(|l| l.starts_with('#')) {
                    s.push_str(line);
                    s.push('\n');
                }
                if let Some(first) = self.results.first() {
                    let keys: Vec<&String> = first.keys().collect();
                    s.push_str(&keys.iter().map(|k| k.as_str()).collect::<Vec<_>>().join(","));
                    s.push('\n');
                    for r in &self.results {
                        let cells: Vec<String> = keys.iter().map(|k| csv_cell(r.get(*k))).collect();
                        s.push_str(&cells.join(","));
                        s.push('\n');
                    }
                }
                s
            }
        }
    }

    pub fn emit(&self, settings: &Settings) -> Result<(), CliError> {
        let out = self.render(settings);
        match &settings.output {
            Some(path) => std::fs::write(path, out)?,
            None => std::io::stdout().lock().write_all(out.as_bytes())?,
        }
        Ok(())
    }
}

fn csv_cell(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) if s.contains(',') || s.contains('"') => format!("\"{}\"", s.replace('"', "\"\"")),
        Some(Value::String(s)) => s.clone(),
        Some(other) => other.to_string(),
    }
}
