//! Rendering of command results as aligned tables, CSV or JSON.
//!
//! JSON and CSV floats carry 12 significant digits, human tables 6, so that
//! repeated runs produce byte-identical output.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Table,
    Csv,
    Json,
}

pub const JSON_DIGITS: usize = 12;
pub const TABLE_DIGITS: usize = 6;

/// Rounds to `digits` significant digits through the decimal representation.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", digits - 1, x).parse().unwrap_or(x)
}

/// `%g`-style formatting with `digits` significant digits.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mant, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let mant = trim_zeros(mant);
        format!("{mant}e{exp}")
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// JSON number rounded to [`JSON_DIGITS`]; non-finite values become null.
pub fn jf(x: f64) -> Value {
    if x.is_finite() {
        Value::from(round_sig(x, JSON_DIGITS))
    } else {
        Value::Null
    }
}

/// Exact integer as a JSON number of any size.
pub fn jint(s: &str) -> Value {
    Value::Number(s.parse().expect("integer literal"))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(String),
    Float(f64),
    Text(String),
    Empty,
}

impl Cell {
    pub fn int(x: impl ToString) -> Self {
        Cell::Int(x.to_string())
    }

    pub fn text(x: impl Into<String>) -> Self {
        Cell::Text(x.into())
    }

    fn human(&self) -> String {
        match self {
            Cell::Int(s) | Cell::Text(s) => s.clone(),
            Cell::Float(x) => fmt_sig(*x, TABLE_DIGITS),
            Cell::Empty => String::new(),
        }
    }

    fn machine(&self) -> String {
        match self {
            Cell::Int(s) | Cell::Text(s) => s.clone(),
            Cell::Float(x) => fmt_sig(*x, JSON_DIGITS),
            Cell::Empty => String::new(),
        }
    }

    pub fn json(&self) -> Value {
        match self {
            Cell::Int(s) => jint(s),
            Cell::Float(x) => jf(*x),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Empty => Value::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Section {
    pub fn new(title: impl Into<String>, columns: &[&str]) -> Self {
        Self {
            title: title.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        self.rows.push(row);
    }

    /// Rows as an array of objects keyed by column name.
    pub fn json_rows(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| {
                    Value::Object(
                        self.columns
                            .iter()
                            .cloned()
                            .zip(r.iter().map(Cell::json))
                            .collect(),
                    )
                })
                .collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub sections: Vec<Section>,
    pub json: Value,
    pub notes: Vec<String>,
    /// Set when the report is complete but describes a failed check.
    pub failure: Option<period_invariant::Error>,
}

impl Report {
    pub fn single(section: Section) -> Self {
        let json = section.json_rows();
        Self {
            sections: vec![section],
            json,
            notes: Vec::new(),
            failure: None,
        }
    }

    /// A one-row section whose JSON form is a single object.
    pub fn object(section: Section) -> Self {
        let json = section.json_rows()[0].clone();
        Self {
            json,
            ..Self::single(section)
        }
    }

    pub fn render(&self, format: Format) -> anyhow::Result<String> {
        Ok(match format {
            Format::Table => self.render_table(),
            Format::Csv => self.render_csv()?,
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json)?;
                s.push('\n');
                s
            }
        })
    }

    fn render_table(&self) -> String {
        let mut out = String::new();
        for (i, sec) in self.sections.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            if !sec.title.is_empty() {
                let _ = writeln!(out, "{}", sec.title);
            }
            let cells: Vec<Vec<String>> = sec
                .rows
                .iter()
                .map(|r| r.iter().map(Cell::human).collect())
                .collect();
            let mut widths: Vec<usize> = sec.columns.iter().map(|c| c.chars().count()).collect();
            for r in &cells {
                for (j, c) in r.iter().enumerate() {
                    if j < widths.len() {
                        widths[j] = widths[j].max(c.chars().count());
                    }
                }
            }
            let line = |items: &[String]| {
                items
                    .iter()
                    .zip(&widths)
                    .map(|(s, &w)| format!("{s:>w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            let _ = writeln!(out, "{}", line(&sec.columns));
            for r in &cells {
                let _ = writeln!(out, "{}", line(r));
            }
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        out
    }

    fn render_csv(&self) -> anyhow::Result<String> {
        let mut w = csv::WriterBuilder::new()
            .flexible(true)
            .from_writer(Vec::new());
        for (i, sec) in self.sections.iter().enumerate() {
            if i > 0 {
                w.write_record(None::<&[u8]>)?;
            }
            w.write_record(&sec.columns)?;
            for r in &sec.rows {
                w.write_record(r.iter().map(Cell::machine))?;
            }
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }
}
