use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{check_finite, mean, Result, StatsError};
use crate::dataset::DataMatrix;

/// Sample Pearson correlation of two equal-length, non-constant vectors.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(StatsError::TooFewSamples {
            needed: 2,
            got: x.len(),
        });
    }
    check_finite(x)?;
    check_finite(y)?;
    let (xm, ym) = (mean(x), mean(y));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - xm, b - ym);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(StatsError::ConstantInput);
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Symmetric Pearson matrix over the columns of a [`DataMatrix`].
///
/// Constant columns are flagged in `constant` and their whole row and column
/// (diagonal included) hold 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    pub labels: Vec<String>,
    pub values: Vec<f64>,
    pub constant: Vec<bool>,
}

pub fn correlation_matrix(data: &DataMatrix) -> Result<CorrelationMatrix> {
    if data.rows() < 2 {
        return Err(StatsError::TooFewRows(data.rows()));
    }
    let d = data.cols();
    let centered: Vec<Vec<f64>> = (0..d)
        .map(|c| {
            let col = data.column_at(c);
            let m = mean(&col);
            col.into_iter().map(|v| v - m).collect()
        })
        .collect();
    for col in &centered {
        check_finite(col)?;
    }
    let norms: Vec<f64> = centered
        .iter()
        .map(|c| c.iter().map(|v| v * v).sum::<f64>())
        .collect();
    let constant: Vec<bool> = norms.iter().map(|&s| s == 0.0).collect();

    let mut values = vec![0.0; d * d];
    for i in 0..d {
        if constant[i] {
            continue;
        }
        values[i * d + i] = 1.0;
        for j in i + 1..d {
            if constant[j] {
                continue;
            }
            let sxy: f64 = centered[i]
                .iter()
                .zip(&centered[j])
                .map(|(a, b)| a * b)
                .sum();
            let r = (sxy / (norms[i] * norms[j]).sqrt()).clamp(-1.0, 1.0);
            values[i * d + j] = r;
            values[j * d + i] = r;
        }
    }
    Ok(CorrelationMatrix {
        labels: data.columns().to_vec(),
        values,
        constant,
    })
}

impl CorrelationMatrix {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.dim() + j]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn between(&self, a: &str, b: &str) -> Option<f64> {
        Some(self.get(self.index_of(a)?, self.index_of(b)?))
    }

    /// Labeled grid: a header of column labels after an empty corner cell,
    /// then one row per label.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, ",{}", self.labels.join(","))?;
        for (i, label) in self.labels.iter().enumerate() {
            let row: Vec<String> = (0..self.dim())
                .map(|j| self.get(i, j).to_string())
                .collect();
            writeln!(out, "{label},{}", row.join(","))?;
        }
        Ok(())
    }
}
