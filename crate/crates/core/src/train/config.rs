use serde::{Deserialize, Serialize};

use super::{Result, TrainError};

/// Optional rule that ends training before `max_epochs`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EarlyStop {
    #[default]
    None,
    /// Stop once the epoch's training loss is at or below the threshold.
    LossThreshold(f64),
    /// Stop after this many epochs without a new best validation loss.
    Patience(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub batch_size: usize,
    pub max_epochs: usize,
    /// Zero means "run the loop but never update".
    pub learning_rate: f64,
    /// Seeds the per-epoch shuffles and the dropout masks.
    pub seed: u64,
    pub early_stop: EarlyStop,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            batch_size: 8,
            max_epochs: 500,
            learning_rate: 0.01,
            seed: 42,
            early_stop: EarlyStop::None,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.batch_size == 0 {
            return Err(TrainError::InvalidConfig("batch_size must be >= 1".into()));
        }
        if self.max_epochs == 0 {
            return Err(TrainError::InvalidConfig("max_epochs must be >= 1".into()));
        }
        if !(self.learning_rate >= 0.0 && self.learning_rate.is_finite()) {
            return Err(TrainError::InvalidConfig(format!(
                "learning_rate {} must be finite and >= 0",
                self.learning_rate
            )));
        }
        match self.early_stop {
            EarlyStop::LossThreshold(t) if t.is_nan() || t <= 0.0 => Err(
                TrainError::InvalidConfig("loss threshold must be > 0".into()),
            ),
            EarlyStop::Patience(0) => {
                Err(TrainError::InvalidConfig("patience must be >= 1".into()))
            }
            _ => Ok(()),
        }
    }
}
