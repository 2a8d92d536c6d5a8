use serde::{Deserialize, Serialize};

use super::{DataMatrix, DatasetError, Result};

/// Per-column min-max transform fitted on training data.
///
/// Maps `x` to `(x - min) / (max - min)`; constant columns map to 0. Values
/// outside the fitted range are not clipped.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinMaxScaler {
    pub columns: Vec<String>,
    pub mins: Vec<f64>,
    pub maxs: Vec<f64>,
}

impl MinMaxScaler {
    pub fn fit(train: &DataMatrix) -> Result<Self> {
        if train.rows() == 0 {
            return Err(DatasetError::DatasetTooSmall(
                "cannot fit scaler on zero rows".into(),
            ));
        }
        let (mins, maxs) = (0..train.cols())
            .map(|c| {
                let col = train.column_at(c);
                let lo = col.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                (lo, hi)
            })
            .unzip();
        Ok(Self {
            columns: train.columns().to_vec(),
            mins,
            maxs,
        })
    }

    pub fn transform(&self, data: &DataMatrix) -> Result<DataMatrix> {
        if data.columns() != self.columns.as_slice() {
            return Err(DatasetError::Shape(format!(
                "scaler fitted on {:?}, got {:?}",
                self.columns,
                data.columns()
            )));
        }
        let width = data.cols();
        let values = data
            .values()
            .iter()
            .enumerate()
            .map(|(i, &x)| self.scale(i % width, x))
            .collect();
        DataMatrix::new(self.columns.clone(), values)
    }

    pub fn scale(&self, col: usize, x: f64) -> f64 {
        let range = self.maxs[col] - self.mins[col];
        if range == 0.0 {
            0.0
        } else {
            (x - self.mins[col]) / range
        }
    }
}

/// Fits on `train` and applies the same transform to `others`.
pub fn scale_features(
    train: &DataMatrix,
    others: &[&DataMatrix],
) -> Result<(DataMatrix, Vec<DataMatrix>, MinMaxScaler)> {
    let scaler = MinMaxScaler::fit(train)?;
    let scaled = scaler.transform(train)?;
    let rest = others
        .iter()
        .map(|m| scaler.transform(m))
        .collect::<Result<Vec<_>>>()?;
    Ok((scaled, rest, scaler))
}
