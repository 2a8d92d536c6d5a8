use std::io::Write;

use super::{DatasetError, Result};

/// Dense row-major numeric table with unique column names.
#[derive(Clone, Debug, PartialEq)]
pub struct DataMatrix {
    columns: Vec<String>,
    rows: usize,
    values: Vec<f64>,
}

impl DataMatrix {
    pub fn new(columns: Vec<String>, values: Vec<f64>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for c in &columns {
            if !seen.insert(c.as_str()) {
                return Err(DatasetError::DuplicateColumn(c.clone()));
            }
        }
        let width = columns.len();
        if width == 0 {
            if !values.is_empty() {
                return Err(DatasetError::Shape("values without columns".into()));
            }
            return Ok(Self {
                columns,
                rows: 0,
                values,
            });
        }
        if !values.len().is_multiple_of(width) {
            return Err(DatasetError::Shape(format!(
                "{} values do not fill rows of width {width}",
                values.len()
            )));
        }
        Ok(Self {
            rows: values.len() / width,
            columns,
            values,
        })
    }

    pub fn from_rows(columns: Vec<String>, rows: &[Vec<f64>]) -> Result<Self> {
        let width = columns.len();
        if let Some(bad) = rows.iter().position(|r| r.len() != width) {
            return Err(DatasetError::Shape(format!(
                "row {bad} has {} values, expected {width}",
                rows[bad].len()
            )));
        }
        Self::new(columns, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols() + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        let w = self.cols();
        &self.values[row * w..(row + 1) * w]
    }

    pub fn column_at(&self, col: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self.value(r, col)).collect()
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        self.column_index(name).map(|c| self.column_at(c))
    }

    /// Keeps the named columns, in the order given.
    pub fn select(&self, names: &[&str]) -> Result<Self> {
        let idx = names
            .iter()
            .map(|n| {
                self.column_index(n)
                    .ok_or_else(|| DatasetError::UnknownColumn((*n).to_owned()))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut values = Vec::with_capacity(self.rows * idx.len());
        for r in 0..self.rows {
            values.extend(idx.iter().map(|&c| self.value(r, c)));
        }
        Self::new(names.iter().map(|s| (*s).to_owned()).collect(), values)
    }

    pub fn drop_columns(&self, names: &[&str]) -> Result<Self> {
        let keep: Vec<&str> = self
            .columns
            .iter()
            .map(String::as_str)
            .filter(|c| !names.contains(c))
            .collect();
        self.select(&keep)
    }

    pub fn take_rows(&self, rows: &[usize]) -> Self {
        let mut values = Vec::with_capacity(rows.len() * self.cols());
        for &r in rows {
            values.extend_from_slice(self.row(r));
        }
        Self {
            columns: self.columns.clone(),
            rows: rows.len(),
            values,
        }
    }

    /// Writes a header line and one line per row, comma separated.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for r in 0..self.rows {
            w.write_record(self.row(r).iter().map(|v| v.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }
}
