//! Versioned JSON model files.
//!
//! ```text
//! {
//!   "format": "studentnet-mlp",
//!   "version": 1,
//!   "seed": 42,
//!   "layers": [
//!     { "kind": "dense", "in_width": 30, "out_width": 80, "activation": "relu",
//!       "weights": [[...], ...], "bias": [...] },
//!     { "kind": "dropout", "rate": 0.2 },
//!     ...
//!   ]
//! }
//! ```
//!
//! `weights` holds `out_width` rows of `in_width` values. Numbers are written
//! in shortest round-trip form and parsed exactly, so a reloaded network
//! reproduces predictions bit for bit.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::layer::Activation;
use super::network::{DenseLayer, Layer, Network};
use super::{Matrix, NetError, Result};

pub const MODEL_FORMAT: &str = "studentnet-mlp";
pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format: String,
    version: u32,
    seed: u64,
    layers: Vec<LayerRecord>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum LayerRecord {
    Dense {
        in_width: usize,
        out_width: usize,
        activation: Activation,
        weights: Vec<Vec<f64>>,
        bias: Vec<f64>,
    },
    Dropout {
        rate: f64,
    },
}

pub fn save_network<W: Write>(net: &Network, mut out: W) -> Result<()> {
    let file = ModelFile {
        format: MODEL_FORMAT.to_owned(),
        version: MODEL_FORMAT_VERSION,
        seed: net.seed(),
        layers: net
            .layers()
            .iter()
            .map(|l| match l {
                Layer::Dense(d) => LayerRecord::Dense {
                    in_width: d.in_width(),
                    out_width: d.out_width(),
                    activation: d.activation,
                    weights: d.weights.to_rows(),
                    bias: d.bias.clone(),
                },
                Layer::Dropout { rate } => LayerRecord::Dropout { rate: *rate },
            })
            .collect(),
    };
    serde_json::to_writer_pretty(&mut out, &file)
        .map_err(|e| NetError::CorruptPayload(e.to_string()))?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn load_network<R: Read>(mut source: R) -> Result<Network> {
    let mut text = String::new();
    source
        .read_to_string(&mut text)
        .map_err(|e| NetError::CorruptPayload(e.to_string()))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| NetError::CorruptPayload(e.to_string()))?;
    match value.get("format").and_then(|f| f.as_str()) {
        Some(MODEL_FORMAT) => {}
        other => {
            return Err(NetError::CorruptPayload(format!(
                "format tag {other:?}, expected {MODEL_FORMAT:?}"
            )))
        }
    }
    match value.get("version") {
        Some(v) if v.as_u64() == Some(u64::from(MODEL_FORMAT_VERSION)) => {}
        Some(v) => {
            return Err(NetError::VersionMismatch {
                found: v.to_string(),
                expected: MODEL_FORMAT_VERSION,
            })
        }
        None => return Err(NetError::CorruptPayload("missing version".into())),
    }
    let file: ModelFile =
        serde_json::from_value(value).map_err(|e| NetError::CorruptPayload(e.to_string()))?;

    let layers = file
        .layers
        .into_iter()
        .enumerate()
        .map(|(i, record)| match record {
            LayerRecord::Dense {
                in_width,
                out_width,
                activation,
                weights,
                bias,
            } => {
                if weights.len() != out_width || weights.iter().any(|r| r.len() != in_width) {
                    return Err(NetError::ShapeMismatch(format!(
                        "layer {i}: weights are not {out_width}x{in_width}"
                    )));
                }
                Ok(Layer::Dense(DenseLayer {
                    weights: Matrix::from_rows(&weights)
                        .map_err(|_| NetError::CorruptPayload(format!("layer {i}: bad weights")))?,
                    bias,
                    activation,
                }))
            }
            LayerRecord::Dropout { rate } => Ok(Layer::Dropout { rate }),
        })
        .collect::<Result<Vec<_>>>()?;
    Network::from_layers(layers, file.seed)
}
