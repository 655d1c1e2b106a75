use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};
use sse_core::theorems::{Report, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Columns of the one-row-per-verdict CSV.
const REPORT_COLUMNS: [&str; 14] = [
    "claim",
    "inputs.graph",
    "inputs.delta",
    "inputs.epsilon",
    "inputs.p",
    "inputs.q",
    "inputs.lambda",
    "inputs.seed",
    "verdict",
    "evidence.phi_delta.exact",
    "evidence.norm_lower",
    "evidence.norm_upper",
    "evidence.bound_rhs",
    "runtime_ms",
];

pub struct Sink {
    pub format: Format,
    pub out: Option<PathBuf>,
    pub omit_timing: bool,
}

impl Sink {
    /// Human-readable summary text: stdout when the report goes to a file,
    /// stderr otherwise so that stdout carries only the report.
    pub fn say(&self, args: std::fmt::Arguments) {
        let _ = match self.out {
            Some(_) => std::io::stdout().write_fmt(args),
            None => std::io::stderr().write_fmt(args),
        };
    }

    /// Writes `value` to `--out`, or to stdout when no path is given.
    pub fn emit<T: Serialize>(&self, value: &T) -> Result<()> {
        let value = serde_json::to_value(value)?;
        self.write(self.render(&value, None)?)
    }

    pub fn emit_reports(&self, reports: &[Report]) -> Result<()> {
        let mut reports = reports.to_vec();
        if self.omit_timing {
            reports.iter_mut().for_each(|r| r.runtime_ms = 0);
        }
        let value = match reports.as_slice() {
            [one] => serde_json::to_value(one)?,
            many => serde_json::to_value(many)?,
        };
        self.write(self.render(&value, Some(&REPORT_COLUMNS))?)
    }

    fn render(&self, value: &Value, columns: Option<&[&str]>) -> Result<String> {
        match self.format {
            Format::Json => Ok(serde_json::to_string_pretty(value)? + "\n"),
            Format::Csv => csv_text(value, columns),
        }
    }

    pub fn write(&self, text: String) -> Result<()> {
        match &self.out {
            Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
            None => Ok(std::io::stdout().lock().write_all(text.as_bytes())?),
        }
    }
}

fn flatten(prefix: &str, value: &Value, out: &mut Map<String, Value>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, out);
            }
        }
        other => {
            out.insert(prefix.to_string(), other.clone());
        }
    }
}

fn cell(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(other) => other.to_string(),
    }
}

fn csv_text(value: &Value, columns: Option<&[&str]>) -> Result<String> {
    let rows: Vec<Map<String, Value>> = match value {
        Value::Array(items) => items.iter().map(|v| {
            let mut m = Map::new();
            flatten("", v, &mut m);
            m
        }).collect(),
        v => {
            let mut m = Map::new();
            flatten("", v, &mut m);
            vec![m]
        }
    };
    let header: Vec<String> = match columns {
        Some(cols) => cols.iter().map(|c| c.to_string()).collect(),
        None => {
            let mut keys: Vec<String> = Vec::new();
            for row in &rows {
                for k in row.keys() {
                    if !keys.contains(k) {
                        keys.push(k.clone());
                    }
                }
            }
            keys
        }
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header)?;
    for row in &rows {
        w.write_record(header.iter().map(|k| cell(row.get(k))))?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// 2 if anything is violated, 3 if anything is inconclusive, else 0.
pub fn exit_code(reports: &[Report]) -> i32 {
    let worst = reports.iter().fold(Verdict::Holds, |acc, r| acc.worst(r.verdict));
    match worst {
        Verdict::Violated => 2,
        Verdict::Inconclusive => 3,
        Verdict::Holds | Verdict::HypothesisNotSatisfied => 0,
    }
}

fn show_f64(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), |v| v.to_string())
}

pub fn summarize(r: &Report) -> String {
    let mut s = format!(
        "{} on {}: {}\n",
        serde_json::to_value(r.claim).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default(),
        r.inputs.graph.as_deref().unwrap_or("matrix"),
        r.verdict.as_str()
    );
    if let Some(phi) = r.evidence.phi_delta {
        s += &format!("  phi_delta     {phi}\n");
    }
    if let Some(set) = &r.evidence.witness_set {
        s += &format!("  witness_set   {set}\n");
    }
    s += &format!("  norm_lower    {}\n", show_f64(r.evidence.norm_lower));
    s += &format!("  norm_upper    {}\n", show_f64(r.evidence.norm_upper));
    s += &format!("  bound_rhs     {}\n", show_f64(r.evidence.bound_rhs));
    let raised: Vec<&str> = r.evidence.vacuous_flags.iter().filter(|(_, &v)| v).map(|(k, _)| k.as_str()).collect();
    if !raised.is_empty() {
        s += &format!("  flags         {}\n", raised.join(", "));
    }
    s
}
