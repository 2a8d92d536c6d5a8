//! Dense multilayer perceptron with dropout, trained by backpropagation.
//!
//! Each dense layer computes `y = f(W x + b)` per output unit with `W` stored
//! `out × in`. The training objective is the mean squared error over all
//! batch × output entries; gradients are derived by hand layer by layer.

mod io;
mod layer;
mod loss;
mod matrix;
mod network;

pub use io::{load_network, save_network, MODEL_FORMAT, MODEL_FORMAT_VERSION};
pub use layer::{reference_architecture, Activation, LayerSpec, DEFAULT_DROPOUT};
pub use loss::{mae, mse};
pub use matrix::Matrix;
pub use network::{
    argmax, DenseGradient, DenseLayer, ForwardCache, Gradients, Layer, Mode, Network,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum NetError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("non-finite value in {0}")]
    NonFiniteInput(&'static str),
    #[error("layer widths do not line up: {0}")]
    IncompatibleWidths(String),
    #[error("invalid layer: {0}")]
    InvalidLayer(String),
    #[error("network spec has no dense layer")]
    EmptySpec,
    #[error("forward cache does not match this network or target")]
    StaleCache,
    #[error("learning rate must be positive, got {0}")]
    NonPositiveLearningRate(f64),
    #[error("model format version {found} is not supported (expected {expected})")]
    VersionMismatch { found: String, expected: u32 },
    #[error("corrupt model payload: {0}")]
    CorruptPayload(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = NetError> = std::result::Result<T, E>;
