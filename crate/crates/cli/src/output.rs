use std::fmt::Write as _;
use std::str::FromStr;

use clap::ValueEnum;
use num_bigint::BigInt;
use serde_json::{Map, Number, Value};

use freelog::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug)]
pub enum Cell {
    Int(BigInt),
    Rat(Rational),
    Real(f64),
    Text(String),
    Bool(bool),
    List(Vec<Cell>),
}

impl From<BigInt> for Cell {
    fn from(v: BigInt) -> Self {
        Cell::Int(v)
    }
}

impl From<num_bigint::BigUint> for Cell {
    fn from(v: num_bigint::BigUint) -> Self {
        Cell::Int(v.into())
    }
}

impl From<Rational> for Cell {
    fn from(v: Rational) -> Self {
        Cell::Rat(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

macro_rules! int_cell {
    ($($t:ty),*) => {$(
        impl From<$t> for Cell {
            fn from(v: $t) -> Self {
                Cell::Int(BigInt::from(v))
            }
        }
    )*};
}
int_cell!(i64, u64, usize, u8);

/// A header plus rows, with optional scalar metadata.
pub struct Report {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
    meta: Vec<(&'static str, Cell)>,
}

impl Report {
    pub fn new(columns: &[&'static str]) -> Self {
        Report {
            columns: columns.to_vec(),
            rows: Vec::new(),
            meta: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn meta(&mut self, key: &'static str, value: impl Into<Cell>) {
        self.meta.push((key, value.into()));
    }

    /// CSV table on stdout; metadata, if any, goes to stderr.
    pub fn render(&self, format: Format, precision: usize) -> (String, String) {
        match format {
            Format::Csv => {
                let mut out = self.columns.join(",");
                out.push('\n');
                for row in &self.rows {
                    let fields: Vec<String> = row.iter().map(|c| csv_cell(c, precision)).collect();
                    out.push_str(&fields.join(","));
                    out.push('\n');
                }
                let mut err = String::new();
                for (k, v) in &self.meta {
                    let _ = writeln!(err, "{k}: {}", csv_cell(v, precision));
                }
                (out, err)
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> = self
                            .columns
                            .iter()
                            .zip(row)
                            .map(|(k, c)| ((*k).to_owned(), json_cell(c, precision)))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                let mut top = Map::new();
                if !self.meta.is_empty() {
                    let meta: Map<String, Value> = self
                        .meta
                        .iter()
                        .map(|(k, c)| ((*k).to_owned(), json_cell(c, precision)))
                        .collect();
                    top.insert("meta".into(), Value::Object(meta));
                }
                top.insert("rows".into(), Value::Array(rows));
                let mut out = serde_json::to_string_pretty(&Value::Object(top))
                    .expect("json values always serialize");
                out.push('\n');
                (out, String::new())
            }
        }
    }
}

/// `x` with `digits` significant digits: positional for moderate
/// magnitudes, scientific otherwise.
pub fn format_real(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return format!("{:.*}", digits - 1, 0.0);
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let exp: i32 = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .unwrap_or(0);
    if (-5..digits as i32).contains(&exp) {
        format!("{:.*}", (digits as i32 - 1 - exp) as usize, x)
    } else {
        sci
    }
}

fn csv_cell(c: &Cell, precision: usize) -> String {
    match c {
        Cell::Int(v) => v.to_string(),
        Cell::Rat(r) => format!("{}/{}", r.numer(), r.denom()),
        Cell::Real(x) => format_real(*x, precision),
        Cell::Text(s) => csv_escape(s),
        Cell::Bool(b) => b.to_string(),
        Cell::List(items) => {
            let parts: Vec<String> = items.iter().map(|c| csv_cell(c, precision)).collect();
            csv_escape(&parts.join(" "))
        }
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

fn big_number(v: &BigInt) -> Value {
    Value::Number(Number::from_str(&v.to_string()).expect("integers are valid json numbers"))
}

fn json_cell(c: &Cell, precision: usize) -> Value {
    match c {
        Cell::Int(v) => big_number(v),
        Cell::Rat(r) => Value::Array(vec![big_number(r.numer()), big_number(r.denom())]),
        Cell::Real(x) if x.is_finite() => Value::Number(
            Number::from_str(&format_real(*x, precision))
                .expect("finite reals are valid json numbers"),
        ),
        Cell::Real(_) => Value::Null,
        Cell::Text(s) => Value::String(s.clone()),
        Cell::Bool(b) => Value::Bool(*b),
        Cell::List(items) => Value::Array(items.iter().map(|c| json_cell(c, precision)).collect()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_real(0.9875, 6), "0.987500");
        assert_eq!(format_real(1234.5, 6), "1234.50");
        assert_eq!(format_real(1.5e-93, 6), "1.50000e-93");
        assert_eq!(format_real(0.0, 6), "0.00000");
        assert_eq!(format_real(-2.0, 6), "-2.00000");
    }

    #[test]
    fn rationals_render_as_pairs() {
        let r = Rational::new((-1).into(), 9.into());
        assert_eq!(csv_cell(&Cell::Rat(r.clone()), 12), "-1/9");
        assert_eq!(json_cell(&Cell::Rat(r), 12).to_string(), "[-1,9]");
    }

    #[test]
    fn big_integers_stay_exact_in_json() {
        let v: BigInt = "123456789012345678901234567890".parse().unwrap();
        assert_eq!(
            json_cell(&Cell::Int(v), 12).to_string(),
            "123456789012345678901234567890"
        );
    }
}
