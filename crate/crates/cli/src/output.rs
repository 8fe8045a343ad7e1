//! Serialization of command results.
//!
//! JSON is the stable format: exact integers and rationals are strings
//! (`"6"`, `"13/4"`), floats are numbers rounded to 15 significant digits.
//! Keys are emitted in sorted order, so parsing and re-serializing a
//! result reproduces it byte for byte.

use std::fmt::Display;
use std::time::Duration;

use serde_json::{Map, Value};

/// Value plus the human-readable rendering of one command.
#[derive(Debug)]
pub struct Output {
    pub value: Value,
    pub text: String,
    pub metadata: Map<String, Value>,
}

impl Output {
    pub fn exact(v: impl Display) -> Self {
        let s = v.to_string();
        Output {
            value: Value::String(s.clone()),
            text: s,
            metadata: Map::new(),
        }
    }

    pub fn float(x: f64) -> Self {
        Output {
            value: float(x),
            text: float_text(x),
            metadata: Map::new(),
        }
    }

    pub fn boolean(b: bool) -> Self {
        Output {
            value: Value::Bool(b),
            text: b.to_string(),
            metadata: Map::new(),
        }
    }

    /// Rows of named columns; the text form is tab-separated with a header.
    pub fn table(columns: &[&str], rows: Vec<Vec<Value>>) -> Self {
        let mut text = columns.join("\t");
        for row in &rows {
            text.push('\n');
            let cells: Vec<String> = row.iter().map(cell_text).collect();
            text.push_str(&cells.join("\t"));
        }
        let records = rows
            .into_iter()
            .map(|row| {
                let obj: Map<String, Value> =
                    columns.iter().map(|c| c.to_string()).zip(row).collect();
                Value::Object(obj)
            })
            .collect();
        Output {
            value: Value::Array(records),
            text,
            metadata: Map::new(),
        }
    }

    pub fn object(fields: Vec<(&str, Value)>) -> Self {
        let obj: Map<String, Value> = fields
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        let text = obj
            .iter()
            .map(|(k, v)| format!("{k}: {}", cell_text(v)))
            .collect::<Vec<_>>()
            .join("\n");
        Output {
            value: Value::Object(obj),
            text,
            metadata: Map::new(),
        }
    }

    pub fn meta(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.metadata.insert(key.to_string(), value.into());
        self
    }
}

/// Float rounded to 15 significant digits; non-finite values become null.
pub fn float(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let rounded: f64 = format!("{x:.14e}").parse().unwrap_or(x);
    serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number)
}

fn float_text(x: f64) -> String {
    match float(x) {
        Value::Number(n) => n.to_string(),
        _ => x.to_string(),
    }
}

pub fn exact(v: impl Display) -> Value {
    Value::String(v.to_string())
}

fn cell_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".to_string(),
        other => other.to_string(),
    }
}

pub struct CommandResult {
    command: String,
    output: Output,
}

impl CommandResult {
    pub fn new(command: String, output: Output) -> Self {
        CommandResult { command, output }
    }

    pub fn set_elapsed(&mut self, elapsed: Duration) {
        self.output
            .metadata
            .insert("elapsed_ms".into(), float(elapsed.as_secs_f64() * 1e3));
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("command".into(), Value::String(self.command.clone()));
        obj.insert("value".into(), self.output.value.clone());
        obj.insert(
            "metadata".into(),
            Value::Object(self.output.metadata.clone()),
        );
        Value::Object(obj)
    }

    pub fn emit(&self, json: bool, out: Option<&std::path::Path>) -> std::io::Result<()> {
        let serialized =
            serde_json::to_string(&self.to_json()).expect("JSON values always serialize");
        if json {
            println!("{serialized}");
        } else {
            println!("{}", self.output.text);
        }
        if let Some(path) = out {
            std::fs::write(path, format!("{serialized}\n"))?;
        }
        Ok(())
    }
}
