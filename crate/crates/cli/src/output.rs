//! CSV and JSON emission.
//!
//! CSV files start with `#` comment lines (versions, command, the full run
//! configuration, seed, timestamp), then a header row, then data. Only the
//! `# generated:` line varies between identical runs. Floats are written
//! with 17 significant digits.

use crate::config::{Format, RunConfig, SCHEMA_VERSION};
use crate::error::Result;
use harmeas_mc::SampleSet;
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::io::Write;

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => fmt_f64(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => csv_escape(s),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) if v.is_finite() => json!(v),
            Cell::Num(v) => json!(v.to_string()),
            Cell::Int(v) => json!(v),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

/// Float with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Column names plus rows.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}

/// Result of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub table: Table,
    /// Summary lines, written as comments after the provenance header.
    pub notes: Vec<String>,
    /// False when a validation tolerance was exceeded.
    pub passed: bool,
}

impl Outcome {
    pub fn new(table: Table) -> Self {
        Outcome {
            table,
            notes: Vec::new(),
            passed: true,
        }
    }
}

fn versions() -> String {
    format!(
        "harmeas-cli {} harmeas-core {} harmeas-mc {}",
        env!("CARGO_PKG_VERSION"),
        harmeas_core::VERSION,
        harmeas_mc::VERSION
    )
}

/// Renders `outcome` as CSV; `generated` is the timestamp comment.
pub fn render_csv(cfg: &RunConfig, outcome: &Outcome, generated: &str) -> Result<String> {
    let mut s = String::new();
    writeln!(s, "# {}", versions()).unwrap();
    writeln!(s, "# command: {}", cfg.command.name()).unwrap();
    writeln!(s, "# config: {}", serde_json::to_string(cfg)?).unwrap();
    writeln!(s, "# seed: {}", cfg.mc_config().seed).unwrap();
    writeln!(s, "# generated: {generated}").unwrap();
    writeln!(
        s,
        "# status: {}",
        if outcome.passed { "pass" } else { "fail" }
    )
    .unwrap();
    for note in &outcome.notes {
        writeln!(s, "# {note}").unwrap();
    }
    s.push_str(
        &outcome
            .table
            .columns
            .iter()
            .map(|c| csv_escape(c))
            .collect::<Vec<_>>()
            .join(","),
    );
    s.push('\n');
    for row in &outcome.table.rows {
        s.push_str(&row.iter().map(Cell::csv).collect::<Vec<_>>().join(","));
        s.push('\n');
    }
    Ok(s)
}

/// Renders `outcome` as a JSON document.
pub fn render_json(cfg: &RunConfig, outcome: &Outcome, generated: &str) -> Result<String> {
    let rows: Vec<Value> = outcome
        .table
        .rows
        .iter()
        .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
        .collect();
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "versions": versions(),
        "command": cfg.command.name(),
        "config": cfg,
        "generated": generated,
        "passed": outcome.passed,
        "notes": outcome.notes,
        "columns": outcome.table.columns,
        "rows": rows,
    });
    let mut s = serde_json::to_string_pretty(&doc)?;
    s.push('\n');
    Ok(s)
}

/// Everything after the comment lines of a CSV document.
pub fn csv_body(text: &str) -> String {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect()
}

/// Writes `outcome` to the configured path, or stdout.
pub fn emit(cfg: &RunConfig, outcome: &Outcome) -> Result<()> {
    let generated = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
    let text = match cfg.output.format {
        Format::Csv => render_csv(cfg, outcome, &generated)?,
        Format::Json => render_json(cfg, outcome, &generated)?,
    };
    match &cfg.output.path {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Raw exit samples as CSV: `sampler,path,exit_time,fk_weight,aux_clock,x0,x1,...`.
pub fn samples_csv(sets: &[(&str, &SampleSet)]) -> String {
    let dim = sets
        .iter()
        .flat_map(|(_, s)| s.samples.first())
        .map(|s| s.exit_point.len())
        .max()
        .unwrap_or(0);
    let mut s = String::from("sampler,path,exit_time,fk_weight,aux_clock");
    for k in 0..dim {
        write!(s, ",x{k}").unwrap();
    }
    s.push('\n');
    for (name, set) in sets {
        for (i, e) in set.samples.iter().enumerate() {
            write!(
                s,
                "{name},{i},{},{},{}",
                fmt_f64(e.exit_time),
                fmt_f64(e.fk_weight),
                fmt_f64(e.aux_clock)
            )
            .unwrap();
            for x in &e.exit_point {
                write!(s, ",{}", fmt_f64(*x)).unwrap();
            }
            s.push('\n');
        }
    }
    s
}
