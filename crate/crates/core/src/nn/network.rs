use super::layer::{Activation, LayerSpec};
use super::loss::mse_gradient;
use super::{Matrix, NetError, Result};
use crate::rng::SeededRng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Dropout masks are drawn and applied (inverted dropout).
    Train,
    /// Dropout is the identity.
    Infer,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenseLayer {
    /// `out × in`.
    pub weights: Matrix,
    pub bias: Vec<f64>,
    pub activation: Activation,
}

impl DenseLayer {
    pub fn in_width(&self) -> usize {
        self.weights.cols()
    }

    pub fn out_width(&self) -> usize {
        self.weights.rows()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Layer {
    Dense(DenseLayer),
    Dropout { rate: f64 },
}

impl Layer {
    pub fn spec(&self) -> LayerSpec {
        match self {
            Layer::Dense(d) => LayerSpec::dense(d.in_width(), d.out_width(), d.activation),
            Layer::Dropout { rate } => LayerSpec::dropout(*rate),
        }
    }
}

/// Ordered layers plus the seed their weights were drawn from.
#[derive(Clone, Debug, PartialEq)]
pub struct Network {
    layers: Vec<Layer>,
    seed: u64,
}

/// Intermediate values of one forward pass, consumed by [`Network::backward`].
#[derive(Clone, Debug)]
pub struct ForwardCache {
    specs: Vec<LayerSpec>,
    inputs: Vec<Matrix>,
    pre_activations: Vec<Option<Matrix>>,
    masks: Vec<Option<Vec<f64>>>,
    output: Matrix,
}

impl ForwardCache {
    pub fn output(&self) -> &Matrix {
        &self.output
    }

    pub fn batch_size(&self) -> usize {
        self.output.rows()
    }

    /// Dropout mask of layer `index`, if it drew one: each entry is 0 or
    /// `1 / (1 - rate)`.
    pub fn mask(&self, index: usize) -> Option<&[f64]> {
        self.masks.get(index)?.as_deref()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenseGradient {
    pub weights: Matrix,
    pub bias: Vec<f64>,
}

/// ∂L/∂W and ∂L/∂b for each dense layer, in layer order.
#[derive(Clone, Debug, PartialEq)]
pub struct Gradients {
    pub layers: Vec<DenseGradient>,
}

impl Gradients {
    /// Flattened in the order of [`Network::parameters`].
    pub fn flatten(&self) -> Vec<f64> {
        self.layers
            .iter()
            .flat_map(|g| g.weights.data().iter().chain(&g.bias).copied())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.flatten().iter().all(|&g| g == 0.0)
    }
}

fn validate(specs: &[LayerSpec]) -> Result<()> {
    let mut width: Option<usize> = None;
    for (i, spec) in specs.iter().enumerate() {
        match *spec {
            LayerSpec::Dense {
                in_width,
                out_width,
                ..
            } => {
                if in_width == 0 || out_width == 0 {
                    return Err(NetError::InvalidLayer(format!("layer {i}: zero width")));
                }
                if let Some(w) = width {
                    if w != in_width {
                        return Err(NetError::IncompatibleWidths(format!(
                            "layer {i} expects {in_width} inputs but receives {w}"
                        )));
                    }
                }
                width = Some(out_width);
            }
            LayerSpec::Dropout { rate } => {
                if !(0.0..1.0).contains(&rate) {
                    return Err(NetError::InvalidLayer(format!(
                        "layer {i}: dropout rate {rate} not in [0, 1)"
                    )));
                }
            }
        }
    }
    if width.is_none() {
        return Err(NetError::EmptySpec);
    }
    Ok(())
}

/// Index of the largest value; ties go to the lowest index.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}

impl Network {
    /// Glorot-uniform weights `U(-√(6/(in+out)), √(6/(in+out)))`, zero
    /// biases. Weights are drawn layer by layer in row-major order from
    /// `SeededRng::new(seed)`.
    pub fn init(specs: &[LayerSpec], seed: u64) -> Result<Self> {
        validate(specs)?;
        let mut rng = SeededRng::new(seed);
        let layers = specs
            .iter()
            .map(|spec| match *spec {
                LayerSpec::Dense {
                    in_width,
                    out_width,
                    activation,
                } => {
                    let limit = (6.0 / (in_width + out_width) as f64).sqrt();
                    let data = (0..in_width * out_width)
                        .map(|_| limit * (2.0 * rng.next_f64() - 1.0))
                        .collect();
                    Layer::Dense(DenseLayer {
                        weights: Matrix::new(out_width, in_width, data)
                            .expect("sizes match by construction"),
                        bias: vec![0.0; out_width],
                        activation,
                    })
                }
                LayerSpec::Dropout { rate } => Layer::Dropout { rate },
            })
            .collect();
        Ok(Self { layers, seed })
    }

    /// Network from explicit layers (hand-set weights, deserialized models).
    pub fn from_layers(layers: Vec<Layer>, seed: u64) -> Result<Self> {
        for (i, layer) in layers.iter().enumerate() {
            if let Layer::Dense(d) = layer {
                if d.bias.len() != d.out_width() {
                    return Err(NetError::ShapeMismatch(format!(
                        "layer {i}: {} biases for {} outputs",
                        d.bias.len(),
                        d.out_width()
                    )));
                }
                if d.bias.iter().any(|b| !b.is_finite()) {
                    return Err(NetError::NonFiniteInput("bias"));
                }
            }
        }
        let specs: Vec<LayerSpec> = layers.iter().map(Layer::spec).collect();
        validate(&specs)?;
        Ok(Self { layers, seed })
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn specs(&self) -> Vec<LayerSpec> {
        self.layers.iter().map(Layer::spec).collect()
    }

    fn dense_layers(&self) -> impl Iterator<Item = &DenseLayer> {
        self.layers.iter().filter_map(|l| match l {
            Layer::Dense(d) => Some(d),
            Layer::Dropout { .. } => None,
        })
    }

    pub fn input_width(&self) -> usize {
        self.dense_layers().next().map_or(0, DenseLayer::in_width)
    }

    pub fn output_width(&self) -> usize {
        self.dense_layers().last().map_or(0, DenseLayer::out_width)
    }

    pub fn param_counts(&self) -> Vec<usize> {
        self.specs().iter().map(LayerSpec::param_count).collect()
    }

    pub fn param_count(&self) -> usize {
        self.param_counts().iter().sum()
    }

    /// All weights and biases: per dense layer, `W` row-major then `b`.
    pub fn parameters(&self) -> Vec<f64> {
        self.dense_layers()
            .flat_map(|d| d.weights.data().iter().chain(&d.bias).copied())
            .collect()
    }

    pub fn set_parameters(&mut self, params: &[f64]) -> Result<()> {
        if params.len() != self.param_count() {
            return Err(NetError::ShapeMismatch(format!(
                "{} parameters for a network with {}",
                params.len(),
                self.param_count()
            )));
        }
        if params.iter().any(|p| !p.is_finite()) {
            return Err(NetError::NonFiniteInput("parameters"));
        }
        let mut rest = params;
        for layer in &mut self.layers {
            if let Layer::Dense(d) = layer {
                let nw = d.weights.data().len();
                d.weights.data_mut().copy_from_slice(&rest[..nw]);
                let nb = d.bias.len();
                d.bias.copy_from_slice(&rest[nw..nw + nb]);
                rest = &rest[nw + nb..];
            }
        }
        Ok(())
    }

    /// Runs the batch (`rows = samples`) through every layer.
    ///
    /// In [`Mode::Train`] each dropout unit is kept with probability
    /// `1 - rate` (one `rng` draw per unit and sample) and kept units are
    /// scaled by `1 / (1 - rate)`.
    pub fn forward(
        &self,
        batch: &Matrix,
        mode: Mode,
        rng: &mut SeededRng,
    ) -> Result<(Matrix, ForwardCache)> {
        self.run(batch, mode, Some(rng))
    }

    /// Inference-mode output; needs no random source.
    pub fn infer(&self, batch: &Matrix) -> Result<Matrix> {
        self.run(batch, Mode::Infer, None).map(|(out, _)| out)
    }

    fn run(
        &self,
        batch: &Matrix,
        mode: Mode,
        mut rng: Option<&mut SeededRng>,
    ) -> Result<(Matrix, ForwardCache)> {
        if batch.cols() != self.input_width() {
            return Err(NetError::ShapeMismatch(format!(
                "batch has {} columns, network expects {}",
                batch.cols(),
                self.input_width()
            )));
        }
        let n = self.layers.len();
        let mut inputs = Vec::with_capacity(n);
        let mut pre_activations = Vec::with_capacity(n);
        let mut masks = Vec::with_capacity(n);
        let mut x = batch.clone();
        for layer in &self.layers {
            let (next, z, mask) = match layer {
                Layer::Dense(d) => {
                    let mut z = x.mul_transposed(&d.weights);
                    let width = z.cols();
                    for (i, v) in z.data_mut().iter_mut().enumerate() {
                        *v += d.bias[i % width];
                    }
                    let mut a = z.clone();
                    for v in a.data_mut() {
                        *v = d.activation.apply(*v);
                    }
                    (a, Some(z), None)
                }
                Layer::Dropout { rate } => match (mode, rng.as_deref_mut()) {
                    (Mode::Train, Some(rng)) if *rate > 0.0 => {
                        let keep = 1.0 - rate;
                        let mask: Vec<f64> = (0..x.data().len())
                            .map(|_| {
                                if rng.next_f64() < keep {
                                    1.0 / keep
                                } else {
                                    0.0
                                }
                            })
                            .collect();
                        let mut a = x.clone();
                        for (v, m) in a.data_mut().iter_mut().zip(&mask) {
                            *v *= m;
                        }
                        (a, None, Some(mask))
                    }
                    _ => (x.clone(), None, None),
                },
            };
            inputs.push(std::mem::replace(&mut x, next));
            pre_activations.push(z);
            masks.push(mask);
        }
        if x.data().iter().any(|v| !v.is_finite()) {
            return Err(NetError::NonFiniteInput("network output"));
        }
        let cache = ForwardCache {
            specs: self.specs(),
            inputs,
            pre_activations,
            masks,
            output: x.clone(),
        };
        Ok((x, cache))
    }

    /// Exact gradients of `mse(output, target)` with respect to every `W`
    /// and `b`, reusing the dropout masks recorded in `cache`.
    pub fn backward(&self, cache: &ForwardCache, target: &Matrix) -> Result<Gradients> {
        if cache.specs != self.specs() || cache.inputs.len() != self.layers.len() {
            return Err(NetError::StaleCache);
        }
        if target.shape() != cache.output.shape() {
            return Err(NetError::ShapeMismatch(format!(
                "target {:?} vs output {:?}",
                target.shape(),
                cache.output.shape()
            )));
        }
        let mut upstream = mse_gradient(&cache.output, target);
        let mut grads = Vec::new();
        for (i, layer) in self.layers.iter().enumerate().rev() {
            match layer {
                Layer::Dense(d) => {
                    let z = cache.pre_activations[i]
                        .as_ref()
                        .ok_or(NetError::StaleCache)?;
                    let mut dz = upstream;
                    for (g, &zv) in dz.data_mut().iter_mut().zip(z.data()) {
                        *g *= d.activation.derivative(zv);
                    }
                    let dw = dz.transposed_mul(&cache.inputs[i]);
                    let mut db = vec![0.0; d.out_width()];
                    for r in 0..dz.rows() {
                        for (acc, g) in db.iter_mut().zip(dz.row(r)) {
                            *acc += g;
                        }
                    }
                    upstream = dz.mul(&d.weights);
                    grads.push(DenseGradient {
                        weights: dw,
                        bias: db,
                    });
                }
                Layer::Dropout { .. } => {
                    if let Some(mask) = &cache.masks[i] {
                        for (g, m) in upstream.data_mut().iter_mut().zip(mask) {
                            *g *= m;
                        }
                    }
                }
            }
        }
        grads.reverse();
        Ok(Gradients { layers: grads })
    }

    /// `W ← W − lr·∂L/∂W`, `b ← b − lr·∂L/∂b`.
    pub fn sgd_step(&mut self, grads: &Gradients, learning_rate: f64) -> Result<()> {
        if !(learning_rate > 0.0 && learning_rate.is_finite()) {
            return Err(NetError::NonPositiveLearningRate(learning_rate));
        }
        let congruent = grads.layers.len() == self.dense_layers().count()
            && self.dense_layers().zip(&grads.layers).all(|(d, g)| {
                d.weights.shape() == g.weights.shape() && d.bias.len() == g.bias.len()
            });
        if !congruent {
            return Err(NetError::ShapeMismatch(
                "gradients do not match network".into(),
            ));
        }
        let dense = self.layers.iter_mut().filter_map(|l| match l {
            Layer::Dense(d) => Some(d),
            Layer::Dropout { .. } => None,
        });
        for (d, g) in dense.zip(&grads.layers) {
            for (w, gw) in d.weights.data_mut().iter_mut().zip(g.weights.data()) {
                *w -= learning_rate * gw;
            }
            for (b, gb) in d.bias.iter_mut().zip(&g.bias) {
                *b -= learning_rate * gb;
            }
        }
        Ok(())
    }

    /// Argmax of the inference output for one feature row.
    pub fn predict_class(&self, features: &[f64]) -> Result<usize> {
        let row = Matrix::new(1, features.len(), features.to_vec())?;
        let out = self.infer(&row)?;
        Ok(argmax(out.row(0)))
    }
}
