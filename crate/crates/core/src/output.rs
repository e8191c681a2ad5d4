//! CSV tables with a `#`-prefixed metadata header.
//!
//! Numbers are written with 12 significant digits, so a table survives a
//! write/read cycle exactly once its values are rounded to that precision
//! (see [`CsvTable::rounded`]).

use crate::analysis::DispersionSample;
use crate::error::{Error, Result};
use crate::study::ConvergenceTable;
use std::fmt;
use std::io::{Read, Write};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Number(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Number(v) => format_number(*v),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn parse(raw: &str) -> Cell {
        if raw.is_empty() {
            Cell::Empty
        } else if let Ok(v) = raw.parse::<f64>() {
            Cell::Number(v)
        } else {
            Cell::Text(raw.to_owned())
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Number(v) => Some(*v),
            _ => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Number(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Number)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_owned())
    }
}

/// 12 significant digits in scientific notation.
pub fn format_number(v: f64) -> String {
    // adding +0.0 turns −0 into +0
    format!("{:.11e}", v + 0.0)
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CsvTable {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl CsvTable {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            metadata: Vec::new(),
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(mut self, key: impl Into<String>, value: impl fmt::Display) -> Self {
        self.metadata.push((key.into(), value.to_string()));
        self
    }

    pub fn push_row(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::Configuration(format!(
                "row has {} cells, table has {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    /// Copy with every number rounded to the precision written to disk.
    pub fn rounded(&self) -> Self {
        let mut t = self.clone();
        for cell in t.rows.iter_mut().flatten() {
            if let Cell::Number(v) = cell {
                *v = format_number(*v).parse().expect("formatted float parses");
            }
        }
        t
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        let io = |e: std::io::Error| Error::Io(format!("write failed: {e}"));
        for (k, v) in &self.metadata {
            writeln!(out, "# {k}: {v}").map_err(io)?;
        }
        let mut w = csv::Writer::from_writer(out);
        let csv_err = |e: csv::Error| Error::Io(format!("write failed: {e}"));
        w.write_record(&self.columns).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(csv_err)?;
        }
        w.flush().map_err(io)
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_to(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn read_from<R: Read>(mut input: R) -> Result<Self> {
        let mut text = String::new();
        input
            .read_to_string(&mut text)
            .map_err(|e| Error::Io(format!("read failed: {e}")))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut metadata = Vec::new();
        let mut body_start = 0;
        for line in text.lines() {
            let Some(rest) = line.strip_prefix('#') else { break };
            let rest = rest.trim_start();
            let (k, v) = rest.split_once(": ").unwrap_or((rest, ""));
            metadata.push((k.to_owned(), v.to_owned()));
            body_start += line.len() + 1;
        }
        let body = text.get(body_start..).unwrap_or("");
        let bad = |e: csv::Error| Error::Configuration(format!("malformed CSV: {e}"));
        let mut r = csv::Reader::from_reader(body.as_bytes());
        let columns = r.headers().map_err(bad)?.iter().map(str::to_owned).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            rows.push(rec.map_err(bad)?.iter().map(Cell::parse).collect());
        }
        Ok(Self {
            metadata,
            columns,
            rows,
        })
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}

/// Grid label, then each norm followed by its order against the previous row.
pub fn convergence_csv(table: &ConvergenceTable, first_column: &str) -> CsvTable {
    let mut t = CsvTable::new([
        first_column,
        "L1",
        "order_L1",
        "L2",
        "order_L2",
        "Linf",
        "order_Linf",
    ]);
    for row in &table.rows {
        let e = row.errors.as_array();
        let o = row.orders.map(|o| o.map(Some)).unwrap_or([None; 3]);
        t.rows.push(vec![
            Cell::Text(row.label.clone()),
            e[0].into(),
            o[0].into(),
            e[1].into(),
            o[1].into(),
            e[2].into(),
            o[2].into(),
        ]);
    }
    t
}

pub fn dispersion_csv(samples: &[DispersionSample]) -> CsvTable {
    let mut t = CsvTable::new([
        "kappa2_k",
        "kappa1_h",
        "lambda_exact",
        "lambda_4oc_m",
        "lambda_2oc",
        "lambda_4ow",
    ]);
    for s in samples {
        t.rows.push(
            [
                s.kappa2_k,
                s.kappa1_h,
                s.lambda_exact,
                s.lambda_4oc_m,
                s.lambda_2oc,
                s.lambda_4ow,
            ]
            .into_iter()
            .map(Cell::Number)
            .collect(),
        );
    }
    t
}
