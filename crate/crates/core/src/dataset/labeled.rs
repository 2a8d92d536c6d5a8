use serde::{Deserialize, Serialize};

use super::schema::{self, GRADE_COLUMNS, GRADE_MAX};
use super::{DataMatrix, DatasetError, Result};

pub const CLASS_COUNT: usize = 3;
pub const CLASS_NAMES: [&str; CLASS_COUNT] = ["fail", "pass", "excellent"];

/// Lower edges of the pass and excellent classes on the final grade.
///
/// Class 0 is `[0, pass_from)`, class 1 `[pass_from, excellent_from)`,
/// class 2 `[excellent_from, 20]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradeBins {
    pub pass_from: i64,
    pub excellent_from: i64,
}

impl Default for GradeBins {
    fn default() -> Self {
        Self {
            pass_from: 10,
            excellent_from: 16,
        }
    }
}

impl GradeBins {
    pub fn new(pass_from: i64, excellent_from: i64) -> Result<Self> {
        if !(0 < pass_from && pass_from < excellent_from && excellent_from <= GRADE_MAX) {
            return Err(DatasetError::InvalidBins(format!(
                "need 0 < {pass_from} < {excellent_from} <= {GRADE_MAX}"
            )));
        }
        Ok(Self {
            pass_from,
            excellent_from,
        })
    }

    pub fn bin(&self, grade: i64) -> Result<usize> {
        if !(0..=GRADE_MAX).contains(&grade) {
            return Err(DatasetError::GradeValue(grade));
        }
        Ok(if grade < self.pass_from {
            0
        } else if grade < self.excellent_from {
            1
        } else {
            2
        })
    }
}

/// Final grade → class with the default bins.
pub fn bin_grade(g3: i64) -> Result<usize> {
    GradeBins::default().bin(g3)
}

/// Feature matrix (no grade columns) with one class label per row.
///
/// `row_ids` are the row positions in the originally parsed table, kept so
/// split manifests can name rows independently of any reordering.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledDataset {
    features: DataMatrix,
    labels: Vec<usize>,
    row_ids: Vec<usize>,
}

impl LabeledDataset {
    pub fn new(features: DataMatrix, labels: Vec<usize>, row_ids: Vec<usize>) -> Result<Self> {
        if let Some(g) = features.columns().iter().find(|c| schema::is_grade(c)) {
            return Err(DatasetError::Leakage(g.clone()));
        }
        if labels.len() != features.rows() || row_ids.len() != features.rows() {
            return Err(DatasetError::Shape(format!(
                "{} rows, {} labels, {} row ids",
                features.rows(),
                labels.len(),
                row_ids.len()
            )));
        }
        if let Some(bad) = labels.iter().find(|&&l| l >= CLASS_COUNT) {
            return Err(DatasetError::Shape(format!("label {bad} out of range")));
        }
        Ok(Self {
            features,
            labels,
            row_ids,
        })
    }

    /// Labels rows by binning G3 and drops G1, G2, G3 from the features.
    pub fn from_encoded(encoded: &DataMatrix, bins: &GradeBins) -> Result<Self> {
        let g3 = encoded
            .column("G3")
            .ok_or_else(|| DatasetError::UnknownColumn("G3".into()))?;
        let labels = g3
            .iter()
            .map(|&g| bins.bin(g as i64))
            .collect::<Result<Vec<_>>>()?;
        let present: Vec<&str> = GRADE_COLUMNS
            .iter()
            .copied()
            .filter(|g| encoded.column_index(g).is_some())
            .collect();
        let features = encoded.drop_columns(&present)?;
        Self::new(features, labels, (0..encoded.rows()).collect())
    }

    pub fn features(&self) -> &DataMatrix {
        &self.features
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn row_ids(&self) -> &[usize] {
        &self.row_ids
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn one_hot(&self, row: usize) -> [f64; CLASS_COUNT] {
        let mut v = [0.0; CLASS_COUNT];
        v[self.labels[row]] = 1.0;
        v
    }

    /// Rows at the given positions (not row ids), in that order.
    pub fn subset(&self, positions: &[usize]) -> Self {
        Self {
            features: self.features.take_rows(positions),
            labels: positions.iter().map(|&p| self.labels[p]).collect(),
            row_ids: positions.iter().map(|&p| self.row_ids[p]).collect(),
        }
    }

    /// Same rows and labels with a replacement feature matrix (scaled or
    /// column-selected).
    pub fn with_features(&self, features: DataMatrix) -> Result<Self> {
        Self::new(features, self.labels.clone(), self.row_ids.clone())
    }

    /// Per-class row counts.
    pub fn class_counts(&self) -> [usize; CLASS_COUNT] {
        let mut counts = [0; CLASS_COUNT];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }
}
