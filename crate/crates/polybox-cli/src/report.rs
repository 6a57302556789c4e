//! Deterministic report rendering: a report is an ordered list of records,
//! each an ordered list of key/value fields. Text format prints
//! `key: value` lines with a blank line between records; json-lines prints
//! one JSON object per record.

use std::fmt::Display;

use polybox::{Alphabet, PolyboxCode};

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    JsonLines,
}

pub struct Record {
    kind: &'static str,
    fields: Vec<(&'static str, String)>,
}

impl Record {
    pub fn new(kind: &'static str) -> Record {
        Record { kind, fields: Vec::new() }
    }

    pub fn push(&mut self, key: &'static str, value: impl Display) {
        self.fields.push((key, value.to_string()));
    }
}

#[derive(Default)]
pub struct Report {
    records: Vec<Record>,
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    pub fn push(&mut self, record: Record) {
        self.records.push(record);
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        for record in &self.records {
            match format {
                Format::Text => {
                    if !out.is_empty() {
                        out.push('\n');
                    }
                    out.push_str(&format!("[{}]\n", record.kind));
                    for (key, value) in &record.fields {
                        out.push_str(&format!("{key}: {value}\n"));
                    }
                }
                Format::JsonLines => {
                    let mut map = serde_json::Map::new();
                    map.insert(
                        "record".into(),
                        serde_json::Value::String(record.kind.into()),
                    );
                    for (key, value) in &record.fields {
                        map.insert((*key).into(), json_value(value));
                    }
                    out.push_str(&serde_json::Value::Object(map).to_string());
                    out.push('\n');
                }
            }
        }
        out
    }
}

/// Numbers and booleans become JSON scalars; everything else stays a
/// string.
fn json_value(value: &str) -> serde_json::Value {
    if let Ok(n) = value.parse::<u64>() {
        return serde_json::Value::from(n);
    }
    if let Ok(b) = value.parse::<bool>() {
        return serde_json::Value::from(b);
    }
    serde_json::Value::String(value.to_string())
}

/// One-line code rendering: `{w1; w2; ...}` in alphabet letters.
pub fn format_code(code: &PolyboxCode, alphabet: &Alphabet) -> String {
    let words: Vec<String> =
        code.words().iter().map(|w| w.format(alphabet)).collect();
    format!("{{{}}}", words.join("; "))
}
