use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use serde_json::{json, Value};

use crate::args::Format;

pub const SCHEMA_VERSION: u32 = 1;

/// A command result: a JSON document and the same data as a flat table.
pub struct Report {
    pub command: &'static str,
    pub body: Value,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Report {
    pub fn new(command: &'static str, body: Value, headers: &[&str], rows: Vec<Vec<String>>) -> Self {
        Report { command, body, headers: headers.iter().map(|h| h.to_string()).collect(), rows }
    }

    fn json(&self) -> Value {
        let mut doc = json!({ "schema_version": SCHEMA_VERSION, "command": self.command });
        if let (Value::Object(doc), Value::Object(body)) = (&mut doc, &self.body) {
            doc.extend(body.clone());
        }
        doc
    }

    pub fn render(&self, format: Format) -> io::Result<Vec<u8>> {
        match format {
            Format::Json => {
                let mut out = serde_json::to_vec_pretty(&self.json())?;
                out.push(b'\n');
                Ok(out)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.headers)?;
                for row in &self.rows {
                    w.write_record(row)?;
                }
                w.into_inner().map_err(|e| e.into_error())
            }
        }
    }
}

pub fn emit(report: &Report, format: Format, out: Option<&Path>) -> io::Result<()> {
    let bytes = report.render(format)?;
    match out {
        Some(path) => File::create(path)?.write_all(&bytes),
        None => io::stdout().lock().write_all(&bytes),
    }
}
