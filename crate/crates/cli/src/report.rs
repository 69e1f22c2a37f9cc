use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{Map, Value};

pub const SCHEMA: &str = include_str!("../schema/run_report.schema.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Human,
    Json,
    Csv,
}

/// Uniform result of every subcommand.
///
/// `within_bound` is `measured <= bound` whenever both are present, and
/// absent otherwise.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub outcome: Value,
    pub steps: Option<u64>,
    pub rounds: Option<u64>,
    pub bound: Option<u128>,
    pub within_bound: Option<bool>,
    pub warnings: Vec<String>,
}

impl RunReport {
    pub fn new(command: &str, inputs: Value, outcome: impl Serialize) -> Self {
        RunReport {
            command: command.to_string(),
            inputs,
            outcome: serde_json::to_value(outcome).expect("outcomes serialise"),
            steps: None,
            rounds: None,
            bound: None,
            within_bound: None,
            warnings: Vec::new(),
        }
    }

    pub fn steps(mut self, steps: u64) -> Self {
        self.steps = Some(steps);
        self
    }

    /// Record the measured rounds against a bound and derive `within_bound`.
    pub fn rounds_against(mut self, rounds: Option<u64>, bound: Option<u128>) -> Self {
        self.rounds = rounds;
        self.bound = bound;
        self.within_bound = match (rounds, bound) {
            (Some(r), Some(b)) => Some(r as u128 <= b),
            _ => None,
        };
        self
    }

    /// Record measured steps against a bound.
    pub fn steps_against(mut self, steps: u64, bound: u128) -> Self {
        self.steps = Some(steps);
        self.bound = Some(bound);
        self.within_bound = Some(steps as u128 <= bound);
        self
    }

    pub fn warn(mut self, w: impl Into<String>) -> Self {
        self.warnings.push(w.into());
        self
    }

    pub fn warnings(mut self, ws: impl IntoIterator<Item = String>) -> Self {
        self.warnings.extend(ws);
        self
    }

    pub fn render(&self, format: Format) -> String {
        let value = serde_json::to_value(self).expect("reports serialise");
        match format {
            Format::Json => serde_json::to_string_pretty(&value).expect("json") + "\n",
            Format::Csv => {
                let mut rows = Vec::new();
                flatten("", &value, &mut rows);
                let mut out = String::from("field,value\n");
                for (k, v) in rows {
                    writeln!(out, "{},{}", csv_cell(&k), csv_cell(&v)).unwrap();
                }
                out
            }
            Format::Human => {
                let mut rows = Vec::new();
                flatten("", &value, &mut rows);
                let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
                let mut out = String::new();
                for (k, v) in rows {
                    writeln!(out, "{k:<width$}  {v}").unwrap();
                }
                out
            }
        }
    }
}

/// Leaf paths of a JSON value in document order; empty containers and nulls
/// are kept so every mode shows the same fields.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) if !m.is_empty() => {
            for (k, v) in m {
                flatten(&join(k), v, out);
            }
        }
        Value::Array(a) if !a.is_empty() => {
            for (i, v) in a.iter().enumerate() {
                flatten(&join(&i.to_string()), v, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// `{"k": v, ...}` from pairs, for report inputs.
pub fn inputs<const N: usize>(pairs: [(&str, Value); N]) -> Value {
    Value::Object(pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect::<Map<_, _>>())
}
