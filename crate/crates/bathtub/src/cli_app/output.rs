//! Deterministic tabular output as CSV or JSON lines.
//!
//! Reals are always written with 17 significant digits in scientific
//! notation (`{:.16e}`), independent of locale, so identical inputs give
//! byte-identical files. Missing or non-finite values become an empty CSV
//! field or JSON `null`.

use std::io::Write;

use crate::error::Result;

/// Output encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
    /// A list of reals (`;`-separated in CSV, an array in JSON).
    Reals(Vec<f64>),
    Missing,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Real)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
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

/// Fixed 17-significant-digit rendering of a real.
pub fn format_real(v: f64) -> String {
    format!("{v:.16e}")
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Real(v) if v.is_finite() => format_real(*v),
            Cell::Real(_) | Cell::Missing => String::new(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => {
                format!("\"{}\"", s.replace('"', "\"\""))
            }
            Cell::Text(s) => s.clone(),
            Cell::Reals(v) => v
                .iter()
                .map(|&x| Cell::Real(x).csv())
                .collect::<Vec<_>>()
                .join(";"),
        }
    }

    /// JSON rendering of the cell.
    pub fn json(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Real(v) if v.is_finite() => format_real(*v),
            Cell::Real(_) | Cell::Missing => "null".to_string(),
            Cell::Text(s) => serde_json::Value::String(s.clone()).to_string(),
            Cell::Reals(v) => format!(
                "[{}]",
                v.iter()
                    .map(|&x| Cell::Real(x).json())
                    .collect::<Vec<_>>()
                    .join(",")
            ),
        }
    }
}

/// Renders `{"key": value, ...}` with keys in the given order.
pub fn json_object(fields: &[(&str, Cell)]) -> String {
    let body: Vec<String> = fields
        .iter()
        .map(|(k, v)| format!("{}:{}", serde_json::Value::String(k.to_string()), v.json()))
        .collect();
    format!("{{{}}}", body.join(","))
}

/// A table with a fixed column order.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    /// Empty table with the given header.
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    /// Appends a row (must match the header length).
    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match header");
        self.rows.push(row);
    }

    /// Writes the table: CSV with a header row, or one JSON object per row.
    pub fn write(&self, format: Format, out: &mut dyn Write) -> Result<()> {
        match format {
            Format::Csv => {
                writeln!(out, "{}", self.columns.join(","))?;
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                    writeln!(out, "{}", cells.join(","))?;
                }
            }
            Format::Json => {
                for row in &self.rows {
                    let fields: Vec<(&str, Cell)> = self
                        .columns
                        .iter()
                        .copied()
                        .zip(row.iter().cloned())
                        .collect();
                    writeln!(out, "{}", json_object(&fields))?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_formatting_is_fixed() {
        assert_eq!(format_real(1.0), "1.0000000000000000e0");
        assert_eq!(format_real(-0.1), "-1.0000000000000001e-1");
        assert_eq!(format_real(2.5e-300), "2.5000000000000000e-300");
    }

    #[test]
    fn csv_and_json() {
        let mut t = Table::new(&["n", "E", "kind", "opt"]);
        t.push(vec![3u64.into(), 0.5.into(), "l+".into(), None.into()]);
        let mut csv = Vec::new();
        t.write(Format::Csv, &mut csv).unwrap();
        assert_eq!(
            String::from_utf8(csv).unwrap(),
            "n,E,kind,opt\n3,5.0000000000000000e-1,l+,\n"
        );
        let mut json = Vec::new();
        t.write(Format::Json, &mut json).unwrap();
        let line = String::from_utf8(json).unwrap();
        assert_eq!(
            line,
            "{\"n\":3,\"E\":5.0000000000000000e-1,\"kind\":\"l+\",\"opt\":null}\n"
        );
        let v: serde_json::Value = serde_json::from_str(line.trim()).unwrap();
        assert_eq!(v["E"], 0.5);
    }

    #[test]
    fn csv_quotes_text_with_separators() {
        assert_eq!(Cell::Text("a,b".into()).csv(), "\"a,b\"");
        assert_eq!(Cell::Real(f64::NAN).json(), "null");
    }
}
