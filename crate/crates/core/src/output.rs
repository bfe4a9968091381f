//! CSV and JSON writers shared by the CLI commands.
//!
//! Floats are written with Rust's shortest round-trip formatting, so parsing
//! a value back yields the identical `f64`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::params::GameParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Round-trip decimal text of `v`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

/// A header plus rows of already formatted cells.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    /// Append a row.
    ///
    /// # Panics
    ///
    /// Panics if the row width differs from the header width.
    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.header.len(), "row width must match header");
        self.rows.push(row);
    }

    /// Comma-separated text with a header row and `\n` line endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for line in std::iter::once(&self.header).chain(&self.rows) {
            let _ = writeln!(out, "{}", line.iter().map(|c| escape(c)).collect::<Vec<_>>().join(","));
        }
        out
    }
}

fn escape(cell: &str) -> std::borrow::Cow<'_, str> {
    if cell.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", cell.replace('"', "\"\"")).into()
    } else {
        cell.into()
    }
}

#[derive(Serialize)]
struct Document<'a, R: Serialize> {
    command: &'a str,
    params: &'a GameParams,
    results: &'a R,
}

/// Pretty JSON document `{command, params, results}` ending in a newline.
pub fn json_document<R: Serialize>(command: &str, params: &GameParams, results: &R) -> serde_json::Result<String> {
    let mut s = serde_json::to_string_pretty(&Document {
        command,
        params,
        results,
    })?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for v in [0.1, 1.0 / 3.0, 1e-300, 123456.789, -2.5e-17, 0.0] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(["a", "b"]);
        t.push(vec!["1".into(), "x,y".into()]);
        assert_eq!(t.to_csv(), "a,b\n1,\"x,y\"\n");
    }

    #[test]
    fn json_keys() {
        let p = GameParams::with_unit_stake(10, 0.1, 0.01, 0.05, 2.0).unwrap();
        let doc = json_document("equilibria", &p, &vec![1, 2]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&doc).unwrap();
        assert_eq!(v["command"], "equilibria");
        assert_eq!(v["params"]["n"], 10);
        assert_eq!(v["params"]["r_u"], 1.05 * 2.0);
        assert_eq!(v["results"][1], 2);
    }
}
