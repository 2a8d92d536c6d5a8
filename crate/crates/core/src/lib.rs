//! Student performance pipeline.
//!
//! `studentnet` covers the whole path from the public student-performance
//! table to a trained classifier:
//!
//! - [`dataset`]: schema-checked CSV ingestion, ordinal encoding of the
//!   categorical attributes, grade binning into three classes, seeded
//!   train/validation/test splits and min-max scaling.
//! - [`stats`]: moments (skewness, excess kurtosis), normal probability plots
//!   with Filliben plotting positions, Pearson correlation matrices and
//!   correlation-ranked feature selection.
//! - [`nn`]: a dense/dropout multilayer perceptron with hand-derived
//!   backpropagation, plain SGD and a versioned JSON model format.
//! - [`train`]: the mini-batch training loop, per-epoch history and
//!   classification reports.
//! - [`pipeline`] and [`cli`]: configuration and the `studentnet` binary.
//!
//! Everything that draws random numbers takes an explicit seed and uses
//! [`rng::SeededRng`], so identical inputs give bit-identical outputs.
//!
//! ```
//! use studentnet::dataset::{self, EncodingScheme, GradeBins, LabeledDataset};
//!
//! # fn main() -> Result<(), Box<dyn std::error::Error>> {
//! let records = dataset::synthetic::generate(120, 7);
//! let encoded = dataset::encode(&records, &EncodingScheme::alphabetical())?;
//! let labeled = LabeledDataset::from_encoded(&encoded, &GradeBins::default())?;
//! let split = dataset::split(&labeled, 0.7, 0.2, 42)?;
//! assert_eq!(split.train.len() + split.validation.len() + split.test.len(), 120);
//! # Ok(())
//! # }
//! ```

pub mod cli;
pub mod dataset;
pub mod nn;
pub mod pipeline;
pub mod rng;
pub mod stats;
pub mod train;
