use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    Relu,
    Linear,
}

impl Activation {
    pub(crate) fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Relu => z.max(0.0),
            Activation::Linear => z,
        }
    }

    pub(crate) fn derivative(self, z: f64) -> f64 {
        match self {
            Activation::Relu => {
                if z > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Linear => 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LayerSpec {
    Dense {
        in_width: usize,
        out_width: usize,
        activation: Activation,
    },
    Dropout {
        rate: f64,
    },
}

impl LayerSpec {
    pub fn dense(in_width: usize, out_width: usize, activation: Activation) -> Self {
        LayerSpec::Dense {
            in_width,
            out_width,
            activation,
        }
    }

    pub fn dropout(rate: f64) -> Self {
        LayerSpec::Dropout { rate }
    }

    /// `(in + 1) × out` for dense layers, 0 for dropout.
    pub fn param_count(&self) -> usize {
        match *self {
            LayerSpec::Dense {
                in_width,
                out_width,
                ..
            } => (in_width + 1) * out_width,
            LayerSpec::Dropout { .. } => 0,
        }
    }
}

pub const DEFAULT_DROPOUT: f64 = 0.2;

/// Five dense layers `input → 80 → 120 → 20 → 10 → 3`, each hidden layer
/// followed by dropout. Hidden layers use ReLU, the output is linear.
pub fn reference_architecture(input_width: usize, dropout: [f64; 4]) -> Vec<LayerSpec> {
    let widths = [input_width, 80, 120, 20, 10, 3];
    let mut specs = Vec::with_capacity(9);
    for i in 0..5 {
        let activation = if i == 4 {
            Activation::Linear
        } else {
            Activation::Relu
        };
        specs.push(LayerSpec::dense(widths[i], widths[i + 1], activation));
        if i < 4 {
            specs.push(LayerSpec::dropout(dropout[i]));
        }
    }
    specs
}
