//! Descriptive statistics and correlation-based feature selection.
//!
//! All routines are pure functions over slices or [`DataMatrix`] values and
//! use two-pass (mean first, then deviations) accumulation.
//!
//! [`DataMatrix`]: crate::dataset::DataMatrix

mod correlation;
mod moments;
mod normal;
mod probplot;
mod selection;

pub use correlation::{correlation_matrix, pearson, CorrelationMatrix};
pub use moments::{moments, EstimatorVariant, MomentSummary};
pub use normal::inverse_normal_cdf;
pub use probplot::{filliben_positions, probplot, probplot_with, ProbPlot, ProbPlotFit};
pub use selection::{
    select_features, Aggregation, FeatureRanking, RankedFeature, RankingMode, REFERENCE_FEATURES,
};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("need at least 2 rows, got {0}")]
    TooFewRows(usize),
    #[error("column is constant; skewness and kurtosis are undefined")]
    ConstantColumn,
    #[error("input is constant; correlation is undefined")]
    ConstantInput,
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("non-finite value in input")]
    NonFinite,
    #[error("unknown target column {0:?}")]
    UnknownTarget(String),
    #[error("k = {k} exceeds the {available} candidate columns")]
    KTooLarge { k: usize, available: usize },
}

pub type Result<T, E = StatsError> = std::result::Result<T, E>;

pub(crate) fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub(crate) fn check_finite(xs: &[f64]) -> Result<()> {
    if xs.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(StatsError::NonFinite)
    }
}
