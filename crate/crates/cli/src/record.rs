//! One result record, rendered either as a `key=value` line or as JSON.

use std::io::{self, Write};

use serde_json::{Map, Value};

#[derive(Debug, Clone, Default)]
pub struct Record {
    fields: Vec<(String, Value)>,
}

impl Record {
    pub fn new() -> Self {
        Record::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Into<Value>) -> &mut Self {
        self.fields.push((key.into(), value.into()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    /// Space-separated `key=value` pairs in insertion order. Strings are
    /// written bare; they never contain spaces.
    pub fn to_line(&self) -> String {
        self.fields
            .iter()
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k}={s}"),
                Value::Null => format!("{k}=-"),
                other => format!("{k}={other}"),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn to_json(&self) -> String {
        let map: Map<String, Value> = self.fields.iter().cloned().collect();
        Value::Object(map).to_string()
    }

    pub fn write(&self, out: &mut dyn Write, json: bool) -> io::Result<()> {
        if json {
            writeln!(out, "{}", self.to_json())
        } else {
            writeln!(out, "{}", self.to_line())
        }
    }
}

/// Milliseconds with microsecond resolution.
pub fn millis(elapsed: std::time::Duration) -> Value {
    let ms = elapsed.as_secs_f64() * 1e3;
    Value::from((ms * 1e3).round() / 1e3)
}
