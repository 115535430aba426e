//! JSON and CSV rendering with fixed significant-digit counts.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::{CompactFormatter, Formatter, Serializer};

/// Significant digits for every JSON float.
pub const JSON_DIGITS: usize = 17;
/// Significant digits for every CSV float.
pub const CSV_DIGITS: usize = 15;

/// `x` rounded to `digits` significant digits. Positional notation when the
/// decimal exponent lies in `[-5, digits − 2]` (so at least one decimal is
/// printed), scientific otherwise; never locale dependent.
pub fn format_sig(x: f64, digits: usize) -> String {
    // Negative zero prints as 0.0 too.
    if x == 0.0 {
        return "0.0".into();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci
        .split_once('e')
        .expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp > digits as i32 - 2 {
        return format!("{mantissa}e{exp}");
    }
    format!("{:.*}", (digits as i32 - 1 - exp) as usize, x)
}

struct SigFormatter {
    inner: CompactFormatter,
}

impl Formatter for SigFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            writer.write_all(format_sig(value, JSON_DIGITS).as_bytes())
        } else {
            self.inner.write_null(writer)
        }
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Single-line JSON with 17 significant digits per float.
pub fn to_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut buf = Vec::new();
    let mut ser = Serializer::with_formatter(
        &mut buf,
        SigFormatter {
            inner: CompactFormatter,
        },
    );
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

#[derive(Clone, Debug)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) if x.is_finite() => format_sig(*x, CSV_DIGITS),
            Cell::Num(_) => String::new(),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

/// A header plus rows, written as RFC 4180 CSV.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> csv::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("CSV cells are UTF-8"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [
            0.1,
            1.0 / 3.0,
            0.5393446629166316,
            2.0f64.sqrt() * 1e-9,
            6.02e23,
            -1.5,
            1e16,
        ] {
            let s = format_sig(x, JSON_DIGITS);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
            let mantissa = s
                .trim_start_matches('-')
                .split('e')
                .next()
                .unwrap()
                .replace('.', "");
            assert_eq!(mantissa.trim_start_matches('0').len(), 17, "{s}");
        }
    }

    #[test]
    fn positional_and_scientific_ranges() {
        assert_eq!(format_sig(0.5, 3), "0.500");
        assert_eq!(format_sig(123.456, 5), "123.46");
        assert_eq!(format_sig(1.5e-7, 3), "1.50e-7");
        assert_eq!(format_sig(0.0, 17), "0.0");
        assert_eq!(format_sig(-0.0, 15), "0.0");
        assert_eq!(format_sig(12345.0, 3), "1.23e4");
        assert_eq!(format_sig(12.0, 3), "12.0");
    }

    #[test]
    fn json_floats_use_fixed_digits() {
        let json = to_json(&serde_json::json!({"a": 0.5, "b": [1u64, 2], "c": f64::NAN})).unwrap();
        assert_eq!(json, r#"{"a":0.50000000000000000,"b":[1,2],"c":null}"#);
    }

    #[test]
    fn csv_quotes_and_digits() {
        let mut t = Table::new(&["x", "label"]);
        t.push(vec![Cell::from(1.0 / 3.0), Cell::from("a,b")]);
        assert_eq!(t.to_csv().unwrap(), "x,label\n0.333333333333333,\"a,b\"\n");
    }
}
