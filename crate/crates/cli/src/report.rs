//! Tabular reports rendered as CSV (with `#` metadata lines) or as a single
//! JSON object `{config, rows, summary}`.

use std::fmt::Write as _;

use serde_json::{json, Map, Value as Json};

/// Significant digits used for every floating-point cell.
pub const FLOAT_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i128),
    Float(f64),
    Bool(bool),
    Text(String),
    Missing,
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value::Int(v as i128)
    }
}

impl From<u128> for Value {
    fn from(v: u128) -> Self {
        Value::Int(v as i128)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i128)
    }
}

impl From<u32> for Value {
    fn from(v: u32) -> Self {
        Value::Int(v as i128)
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

impl<T: Into<Value>> From<Option<T>> for Value {
    fn from(v: Option<T>) -> Self {
        v.map_or(Value::Missing, Into::into)
    }
}

/// Rounds to [`FLOAT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", FLOAT_DIGITS - 1, x).parse().unwrap()
}

impl Value {
    fn csv(&self) -> String {
        match self {
            Value::Int(v) => v.to_string(),
            Value::Float(v) => {
                let r = round_sig(*v);
                if r == 0.0 {
                    "0".to_string()
                } else if (1e-5..1e15).contains(&r.abs()) {
                    r.to_string()
                } else {
                    format!("{r:e}")
                }
            }
            Value::Bool(v) => v.to_string(),
            Value::Text(s) => s.clone(),
            Value::Missing => String::new(),
        }
    }

    fn json(&self) -> Json {
        match self {
            Value::Int(v) => match i64::try_from(*v) {
                Ok(i) => json!(i),
                Err(_) => match u64::try_from(*v) {
                    Ok(u) => json!(u),
                    Err(_) => Json::String(v.to_string()),
                },
            },
            Value::Float(v) => {
                let r = round_sig(*v);
                if r == 0.0 {
                    json!(0.0)
                } else {
                    serde_json::Number::from_f64(r).map_or(Json::Null, Json::Number)
                }
            }
            Value::Bool(v) => json!(v),
            Value::Text(s) => json!(s),
            Value::Missing => Json::Null,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub config: Vec<(String, Value)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    pub summary: Vec<(String, Value)>,
}

impl Report {
    pub fn new(command: &str, config: Vec<(String, Value)>, columns: &[&str]) -> Self {
        Self {
            command: command.to_string(),
            config,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            summary: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn summarize(&mut self, key: &str, value: impl Into<Value>) {
        self.summary.push((key.to_string(), value.into()));
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# digold {}", env!("CARGO_PKG_VERSION")).unwrap();
        writeln!(out, "# command: {}", self.command).unwrap();
        for (k, v) in &self.config {
            writeln!(out, "# config.{k}: {}", v.csv()).unwrap();
        }
        for (k, v) in &self.summary {
            writeln!(out, "# summary.{k}: {}", v.csv()).unwrap();
        }
        writeln!(out, "{}", self.columns.join(",")).unwrap();
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Value::csv).collect();
            writeln!(out, "{}", cells.join(",")).unwrap();
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut config = Map::new();
        config.insert("command".into(), json!(self.command));
        config.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        for (k, v) in &self.config {
            config.insert(k.clone(), v.json());
        }
        let rows: Vec<Json> = if self.columns.len() == 1 {
            self.rows.iter().map(|r| r[0].json()).collect()
        } else {
            self.rows
                .iter()
                .map(|r| {
                    Json::Object(
                        self.columns
                            .iter()
                            .zip(r)
                            .map(|(c, v)| (c.clone(), v.json()))
                            .collect(),
                    )
                })
                .collect()
        };
        let summary: Map<String, Json> = self
            .summary
            .iter()
            .map(|(k, v)| (k.clone(), v.json()))
            .collect();
        let mut text = serde_json::to_string_pretty(&json!({
            "config": config,
            "rows": rows,
            "summary": summary,
        }))
        .unwrap();
        text.push('\n');
        text
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(round_sig(6.866_336_134_682_1), 6.866_336_134_68);
        assert_eq!(Value::Float(1.0 / 3.0).csv(), "0.333333333333");
        assert_eq!(Value::Float(-0.0).csv(), "0");
        assert_eq!(Value::Missing.csv(), "");
        assert_eq!(
            Value::Float(8.881_784_197_001_252e-16).csv(),
            "8.881784197e-16"
        );
        assert_eq!(Value::Float(2.5e20).csv(), "2.5e20");
    }

    #[test]
    fn single_column_json_is_flat() {
        let mut r = Report::new("enumerate", vec![("k".into(), 2u64.into())], &["n"]);
        r.push_row(vec![11u64.into()]);
        r.push_row(vec![13u64.into()]);
        let v: Json = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["rows"], json!([11, 13]));
        assert_eq!(v["config"]["k"], json!(2));
    }
}
