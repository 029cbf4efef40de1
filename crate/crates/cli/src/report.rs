//! Report records and exit statuses.

use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    JsonLines,
}

/// Exit statuses shared by every subcommand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    /// Success or verified.
    Ok = 0,
    /// A valid run with a negative outcome.
    Negative = 1,
    /// Usage or input error.
    Usage = 2,
}

/// Output of one command: JSON records plus their text rendering.
pub struct Report {
    command: &'static str,
    params: Value,
    seed: Option<u64>,
    records: Vec<Value>,
    text: Vec<String>,
    pub status: Status,
}

impl Report {
    pub fn new(command: &'static str, params: Value, seed: Option<u64>) -> Self {
        Report {
            command,
            params,
            seed,
            records: Vec::new(),
            text: Vec::new(),
            status: Status::Ok,
        }
    }

    /// Adds one record with the common envelope.
    pub fn record(&mut self, verdict: &str, body: impl Serialize) {
        let body = serde_json::to_value(body).expect("report bodies serialize");
        self.records.push(json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "params": self.params,
            "seed": self.seed,
            "verdict": verdict,
            "body": body,
        }));
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.text.push(text.into());
    }

    pub fn negative(&mut self) {
        self.status = Status::Negative;
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::JsonLines => {
                for r in &self.records {
                    out.push_str(&serde_json::to_string(r).expect("records serialize"));
                    out.push('\n');
                }
            }
            Format::Text => {
                for l in &self.text {
                    out.push_str(l);
                    out.push('\n');
                }
            }
        }
        out
    }
}
