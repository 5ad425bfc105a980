//! Deterministic number formatting and report rendering.

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Number, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatKind {
    Json,
    Csv,
}

/// Output kind plus the number of significant digits kept (6..=17).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutputFormat {
    pub kind: FormatKind,
    pub precision: u8,
}

impl OutputFormat {
    pub const DEFAULT_PRECISION: u8 = 17;

    pub fn new(kind: FormatKind, precision: u8) -> Result<Self, String> {
        if (6..=17).contains(&precision) {
            Ok(Self { kind, precision })
        } else {
            Err(format!("precision must lie in [6, 17], got {precision}"))
        }
    }
}

/// Rounds to `precision` significant digits.
pub fn round_sig(x: f64, precision: u8) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", usize::from(precision - 1), x)
        .parse()
        .unwrap_or(x)
}

/// Shortest round-trip representation of `x` rounded to `precision` digits.
/// Non-finite values render as `null`.
pub fn format_number(x: f64, precision: u8) -> String {
    match Number::from_f64(round_sig(x, precision)) {
        Some(n) => n.to_string(),
        None => "null".to_owned(),
    }
}

fn round_value(v: Value, precision: u8) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => n
            .as_f64()
            .and_then(|x| Number::from_f64(round_sig(x, precision)))
            .map_or(Value::Null, Value::Number),
        Value::Array(items) => Value::Array(items.into_iter().map(|i| round_value(i, precision)).collect()),
        Value::Object(map) => Value::Object(
            map.into_iter()
                .map(|(k, v)| (k, round_value(v, precision)))
                .collect(),
        ),
        other => other,
    }
}

/// Pretty JSON with every float rounded, terminated by a newline.
pub fn to_json<T: Serialize>(report: &T, precision: u8) -> String {
    let value = serde_json::to_value(report).expect("reports serialize to JSON");
    let mut out = serde_json::to_string_pretty(&round_value(value, precision)).expect("valid JSON value");
    out.push('\n');
    out
}

/// A CSV field: float, bool, or absent.
pub enum Field<'a> {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(&'a str),
    Empty,
}

pub fn csv_row(fields: &[Field<'_>], precision: u8) -> String {
    let cells: Vec<String> = fields
        .iter()
        .map(|f| match f {
            Field::Num(x) if x.is_finite() => format_number(*x, precision),
            Field::Num(_) | Field::Empty => String::new(),
            Field::Int(n) => n.to_string(),
            Field::Bool(b) => b.to_string(),
            Field::Text(s) => (*s).to_owned(),
        })
        .collect();
    let mut line = cells.join(",");
    line.push('\n');
    line
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_shortest_form() {
        assert_eq!(format_number(0.5, 17), "0.5");
        assert_eq!(format_number(1e-10, 17), "1e-10");
        assert_eq!(format_number(0.1 + 0.2, 17), "0.30000000000000004");
        assert_eq!(format_number(0.1 + 0.2, 15), "0.3");
        assert_eq!(format_number(std::f64::consts::PI, 6), "3.14159");
        assert_eq!(format_number(f64::NAN, 17), "null");
    }

    #[test]
    fn precision_bounds() {
        assert!(OutputFormat::new(FormatKind::Json, 5).is_err());
        assert!(OutputFormat::new(FormatKind::Json, 18).is_err());
        assert!(OutputFormat::new(FormatKind::Csv, 6).is_ok());
    }

    #[test]
    fn csv_fields() {
        let row = csv_row(
            &[Field::Num(0.25), Field::Empty, Field::Bool(true), Field::Int(7), Field::Text("x")],
            17,
        );
        assert_eq!(row, "0.25,,true,7,x\n");
    }
}
