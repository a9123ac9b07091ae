//! Column-oriented numeric CSV used by every exported data file.

use std::fmt::Write as _;

use crate::error::{GcsfError, Result};

/// Numeric table with named columns of equal length.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub columns: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Result<&[f64]> {
        self.header
            .iter()
            .position(|h| h == name)
            .map(|i| self.columns[i].as_slice())
            .ok_or_else(|| GcsfError::InvalidInput(format!("missing column `{name}`")))
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }
}

/// Render columns as CSV with shortest round-trip float formatting.
pub fn write_columns(header: &[&str], columns: &[&[f64]]) -> String {
    assert_eq!(header.len(), columns.len());
    let rows = columns.first().map_or(0, |c| c.len());
    assert!(columns.iter().all(|c| c.len() == rows), "ragged columns");
    let mut out = header.join(",");
    out.push('\n');
    for i in 0..rows {
        for (j, c) in columns.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            write!(out, "{}", c[i]).unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn read_columns(text: &str) -> Result<Table> {
    let bad = |e: csv::Error| GcsfError::InvalidInput(e.to_string());
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers().map_err(bad)?.iter().map(|h| h.trim().to_string()).collect();
    let mut columns = vec![Vec::new(); header.len()];
    for record in reader.records() {
        let record = record.map_err(bad)?;
        if record.len() != header.len() {
            return Err(GcsfError::InvalidInput(format!("row with {} fields, expected {}", record.len(), header.len())));
        }
        for (col, field) in columns.iter_mut().zip(record.iter()) {
            let v = field
                .trim()
                .parse::<f64>()
                .map_err(|e| GcsfError::InvalidInput(format!("bad number {field:?}: {e}")))?;
            col.push(v);
        }
    }
    Ok(Table { header, columns })
}
