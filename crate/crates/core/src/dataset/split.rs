use serde::{Deserialize, Serialize};

use super::{DatasetError, LabeledDataset, Result};
use crate::rng::SeededRng;

/// Train / validation / test partitions of one labeled dataset.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitDataset {
    pub train: LabeledDataset,
    pub validation: LabeledDataset,
    pub test: LabeledDataset,
    pub seed: u64,
    pub train_ratio: f64,
    pub validation_ratio: f64,
}

/// Row ids per partition; the on-disk record of a split.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitManifest {
    pub seed: u64,
    pub train_ratio: f64,
    pub validation_ratio: f64,
    pub train: Vec<usize>,
    pub validation: Vec<usize>,
    pub test: Vec<usize>,
}

// Guards ceil() against products like 0.3 * 10 = 3.0000000000000004.
fn ceil_count(ratio: f64, n: usize) -> usize {
    (ratio * n as f64 - 1e-9).ceil().max(0.0) as usize
}

/// Seeded shuffle, then `ceil(train_ratio * n)` rows form the training block
/// whose last `ceil(validation_ratio * block)` rows become validation; the
/// rest is test.
pub fn split(
    dataset: &LabeledDataset,
    train_ratio: f64,
    validation_ratio: f64,
    seed: u64,
) -> Result<SplitDataset> {
    if !(train_ratio > 0.0 && train_ratio < 1.0) {
        return Err(DatasetError::RatioOutOfRange(format!(
            "train_ratio {train_ratio} not in (0, 1)"
        )));
    }
    if !(0.0..1.0).contains(&validation_ratio) {
        return Err(DatasetError::RatioOutOfRange(format!(
            "validation_ratio {validation_ratio} not in [0, 1)"
        )));
    }
    let n = dataset.len();
    let block = ceil_count(train_ratio, n).min(n);
    let n_val = ceil_count(validation_ratio, block);
    let n_train = block - n_val.min(block);
    if n_train == 0 {
        return Err(DatasetError::DatasetTooSmall(format!(
            "{n} rows leave no training rows"
        )));
    }
    if validation_ratio > 0.0 && n_val == 0 {
        return Err(DatasetError::DatasetTooSmall(format!(
            "{n} rows leave no validation rows"
        )));
    }
    if block == n {
        return Err(DatasetError::DatasetTooSmall(format!(
            "{n} rows leave no test rows"
        )));
    }

    let order = SeededRng::new(seed).permutation(n);
    Ok(SplitDataset {
        train: dataset.subset(&order[..n_train]),
        validation: dataset.subset(&order[n_train..block]),
        test: dataset.subset(&order[block..]),
        seed,
        train_ratio,
        validation_ratio,
    })
}

impl SplitDataset {
    pub fn manifest(&self) -> SplitManifest {
        SplitManifest {
            seed: self.seed,
            train_ratio: self.train_ratio,
            validation_ratio: self.validation_ratio,
            train: self.train.row_ids().to_vec(),
            validation: self.validation.row_ids().to_vec(),
            test: self.test.row_ids().to_vec(),
        }
    }
}

impl SplitManifest {
    /// Rebuilds the partitions from a dataset whose row ids match the manifest.
    pub fn apply(&self, dataset: &LabeledDataset) -> Result<SplitDataset> {
        let position: std::collections::HashMap<usize, usize> = dataset
            .row_ids()
            .iter()
            .enumerate()
            .map(|(pos, &id)| (id, pos))
            .collect();
        let pick = |ids: &[usize]| -> Result<LabeledDataset> {
            let pos = ids
                .iter()
                .map(|id| {
                    position.get(id).copied().ok_or_else(|| {
                        DatasetError::Shape(format!("manifest row {id} not in dataset"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(dataset.subset(&pos))
        };
        Ok(SplitDataset {
            train: pick(&self.train)?,
            validation: pick(&self.validation)?,
            test: pick(&self.test)?,
            seed: self.seed,
            train_ratio: self.train_ratio,
            validation_ratio: self.validation_ratio,
        })
    }
}
