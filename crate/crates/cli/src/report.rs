//! Tabular reports rendered as JSON or CSV.

use std::fmt;
use std::str::FromStr;

use clap::ValueEnum;
use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Output format and significant digits for floating-point fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportConfig {
    pub format: Format,
    pub precision: u8,
}

impl ReportConfig {
    pub const MIN_PRECISION: u8 = 4;
    pub const MAX_PRECISION: u8 = 17;
    pub const DEFAULT_PRECISION: u8 = 12;

    /// `x` rounded to `precision` significant digits. Non-finite values
    /// become `null`.
    pub fn float(&self, x: f64) -> Value {
        if !x.is_finite() {
            return Value::Null;
        }
        let digits = usize::from(self.precision.saturating_sub(1));
        let rounded: f64 = format!("{x:.digits$e}").parse().expect("formatted float parses");
        let rounded = if rounded == 0.0 { 0.0 } else { rounded };
        Number::from_f64(rounded).map_or(Value::Null, Value::Number)
    }
}

/// Exact integer of any size as a JSON number.
pub fn integer(digits: impl fmt::Display) -> Value {
    Value::Number(Number::from_str(&digits.to_string()).expect("decimal integer"))
}

pub fn text(s: impl Into<String>) -> Value {
    Value::String(s.into())
}

/// A named table plus scalar metadata. CSV output carries only the table.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: &'static str,
    pub meta: Vec<(&'static str, Value)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Report {
    pub fn new(command: &'static str, columns: Vec<&'static str>) -> Self {
        Self { command, meta: Vec::new(), columns, rows: Vec::new() }
    }

    pub fn meta(mut self, key: &'static str, value: Value) -> Self {
        self.meta.push((key, value));
        self
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }

    fn to_json(&self) -> String {
        let mut root = Map::new();
        root.insert("command".into(), text(self.command));
        for (k, v) in &self.meta {
            root.insert((*k).into(), v.clone());
        }
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> =
                    self.columns.iter().map(|c| (*c).to_string()).zip(row.iter().cloned()).collect();
                Value::Object(obj)
            })
            .collect();
        root.insert("rows".into(), Value::Array(rows));
        let mut out = serde_json::to_string_pretty(&Value::Object(root)).expect("JSON values serialize");
        out.push('\n');
        out
    }

    fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.columns).expect("write to memory");
        for row in &self.rows {
            w.write_record(row.iter().map(csv_field)).expect("write to memory");
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("CSV output is UTF-8")
    }
}

fn csv_field(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(precision: u8) -> ReportConfig {
        ReportConfig { format: Format::Json, precision }
    }

    #[test]
    fn rounding_to_significant_digits() {
        assert_eq!(cfg(4).float(-1.0 / 18.0).to_string(), "-0.05556");
        assert_eq!(cfg(12).float(-0.5).to_string(), "-0.5");
        assert_eq!(cfg(17).float(0.1).to_string(), "0.1");
        assert_eq!(cfg(6).float(f64::NAN), Value::Null);
        assert_eq!(cfg(6).float(-0.0).to_string(), "0.0");
    }

    #[test]
    fn big_integers_stay_exact() {
        let v = integer("123456789012345678901234567890");
        assert_eq!(v.to_string(), "123456789012345678901234567890");
    }

    #[test]
    fn csv_quotes_embedded_commas() {
        let mut r = Report::new("t", vec!["chain", "value"]);
        r.push(vec![text("1,0,+"), cfg(4).float(0.5)]);
        assert_eq!(r.render(Format::Csv), "chain,value\n\"1,0,+\",0.5\n");
    }

    #[test]
    fn json_layout() {
        let mut r = Report::new("t", vec!["n"]).meta("d", integer(3));
        r.push(vec![integer(0)]);
        let v: Value = serde_json::from_str(&r.render(Format::Json)).unwrap();
        assert_eq!(v["command"], "t");
        assert_eq!(v["d"], 3);
        assert_eq!(v["rows"][0]["n"], 0);
    }
}
