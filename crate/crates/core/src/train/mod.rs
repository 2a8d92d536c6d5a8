//! Mini-batch training loop, per-epoch history and classification reports.

mod config;
mod eval;
mod history;
mod run;

pub use config::{EarlyStop, TrainConfig};
pub use eval::{evaluate, EvalReport};
pub use history::{export_history, parse_history, EpochRecord, StopReason, TrainingHistory};
pub use run::{epoch_batches, train};

use thiserror::Error;

use crate::nn::NetError;

#[derive(Debug, Error)]
pub enum TrainError {
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("test set is empty")]
    EmptyTestSet,
    #[error("history is empty")]
    EmptyHistory,
    #[error("feature width {data} does not match network input width {network}")]
    WidthMismatch { data: usize, network: usize },
    #[error("invalid training config: {0}")]
    InvalidConfig(String),
    #[error("patience early stop needs a non-empty validation set")]
    NoValidationSet,
    #[error("training diverged at epoch {0} (non-finite loss)")]
    Diverged(usize),
    #[error("malformed history: {0}")]
    MalformedHistory(String),
    #[error(transparent)]
    Net(#[from] NetError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = TrainError> = std::result::Result<T, E>;
