//! Oracles and fixtures shared by the integration tests and the acceptance
//! suite. Each oracle is written from the textbook definition and shares no
//! code with the library routine it checks.

#![allow(dead_code)]

use std::path::PathBuf;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use studentnet::dataset::synthetic;
use studentnet::nn::{mse, Activation, LayerSpec, Matrix, Mode, Network};
use studentnet::rng::SeededRng;

/// The public dataset file: `$STUDENT_MAT_CSV`, else `data/student-mat.csv`
/// at the workspace root. `None` when neither exists.
pub fn public_dataset() -> Option<PathBuf> {
    if let Some(p) = std::env::var_os("STUDENT_MAT_CSV") {
        let p = PathBuf::from(p);
        return p.is_file().then_some(p);
    }
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/student-mat.csv");
    p.is_file().then_some(p)
}

/// Writes a synthetic table of `n` rows into `dir` and returns its path.
pub fn synthetic_csv(dir: &std::path::Path, n: usize, seed: u64) -> PathBuf {
    let path = dir.join("synthetic.csv");
    std::fs::write(&path, synthetic::to_csv(&synthetic::generate(n, seed))).unwrap();
    path
}

fn rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

fn rational_mean(xs: &[f64]) -> BigRational {
    let sum = xs
        .iter()
        .fold(BigRational::zero(), |acc, &x| acc + rational(x));
    sum / BigRational::from_integer(BigInt::from(xs.len()))
}

/// Exact central moment sums `(Σd², Σd³, Σd⁴)` and the mean.
fn exact_central(xs: &[f64]) -> (f64, BigRational, BigRational, BigRational) {
    let mu = rational_mean(xs);
    let (mut s2, mut s3, mut s4) = (
        BigRational::zero(),
        BigRational::zero(),
        BigRational::zero(),
    );
    for &x in xs {
        let d = rational(x) - &mu;
        let d2 = &d * &d;
        s3 += &d2 * &d;
        s4 += &d2 * &d2;
        s2 += d2;
    }
    (mu.to_f64().unwrap(), s2, s3, s4)
}

/// `(mean, std, skewness, excess kurtosis)` with population (biased)
/// estimators, accumulated exactly.
pub fn oracle_biased(xs: &[f64]) -> (f64, f64, f64, f64) {
    let n = BigRational::from_integer(BigInt::from(xs.len()));
    let (mean, s2, s3, s4) = exact_central(xs);
    let m2 = (&s2 / &n).to_f64().unwrap();
    let m3 = (&s3 / &n).to_f64().unwrap();
    let m4 = (&s4 / &n).to_f64().unwrap();
    (mean, m2.sqrt(), m3 / m2.powf(1.5), m4 / (m2 * m2) - 3.0)
}

/// `(mean, std, skewness, excess kurtosis)` with the sample (n - 1) standard
/// deviation and the adjusted Fisher–Pearson coefficients.
pub fn oracle_bias_corrected(xs: &[f64]) -> (f64, f64, f64, f64) {
    let nf = xs.len() as f64;
    let (mean, g1, g2) = {
        let (m, _, g1, g2) = oracle_biased(xs);
        (m, g1, g2)
    };
    let (_, s2, _, _) = exact_central(xs);
    let var = (s2 / BigRational::from_integer(BigInt::from(xs.len() - 1)))
        .to_f64()
        .unwrap();
    let skew = (nf * (nf - 1.0)).sqrt() / (nf - 2.0) * g1;
    let kurt = (nf - 1.0) / ((nf - 2.0) * (nf - 3.0)) * ((nf + 1.0) * g2 + 6.0);
    (mean, var.sqrt(), skew, kurt)
}

/// Pearson r from exact co-moment sums.
pub fn oracle_pearson(x: &[f64], y: &[f64]) -> f64 {
    let (mx, my) = (rational_mean(x), rational_mean(y));
    let (mut sxy, mut sxx, mut syy) = (
        BigRational::zero(),
        BigRational::zero(),
        BigRational::zero(),
    );
    for (&a, &b) in x.iter().zip(y) {
        let (dx, dy) = (rational(a) - &mx, rational(b) - &my);
        sxy += &dx * &dy;
        sxx += &dx * &dx;
        syy += &dy * &dy;
    }
    let (sxx, syy) = (sxx.to_f64().unwrap(), syy.to_f64().unwrap());
    sxy.to_f64().unwrap() / (sxx.sqrt() * syy.sqrt())
}

/// Filliben's order-statistic medians, straight from the published rule.
pub fn oracle_filliben(n: usize) -> Vec<f64> {
    (1..=n)
        .map(|i| {
            let last = 0.5f64.powf(1.0 / n as f64);
            if i == n {
                last
            } else if i == 1 {
                1.0 - last
            } else {
                (i as f64 - 0.3175) / (n as f64 + 0.365)
            }
        })
        .collect()
}

/// OLS `(slope, intercept, r)` of `y` on `x` with exact sums.
pub fn oracle_ols(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let (mx, my) = (rational_mean(x), rational_mean(y));
    let (mut sxy, mut sxx) = (BigRational::zero(), BigRational::zero());
    for (&a, &b) in x.iter().zip(y) {
        let (dx, dy) = (rational(a) - &mx, rational(b) - &my);
        sxy += &dx * &dy;
        sxx += &dx * &dx;
    }
    let slope = &sxy / &sxx;
    let intercept = (&my - &slope * &mx).to_f64().unwrap();
    (slope.to_f64().unwrap(), intercept, oracle_pearson(x, y))
}

/// Uniform values in `[lo, hi)`.
pub fn uniform(rng: &mut SeededRng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| lo + (hi - lo) * rng.next_f64()).collect()
}

/// `|a - b| / max(|a| + |b|, 1e-8)`.
pub fn relative_error(a: f64, b: f64) -> f64 {
    (a - b).abs() / (a.abs() + b.abs()).max(1e-8)
}

pub struct GradCheck {
    pub max_relative_error: f64,
    pub parameters: usize,
}

/// A random network of 1 to 4 dense layers with widths in 1..=10 and random
/// dropout layers, plus a random batch (1..=8 rows) and target.
pub fn random_case(seed: u64) -> (Network, Matrix, Matrix) {
    let mut rng = SeededRng::new(seed);
    let dense = 1 + rng.below(4) as usize;
    let mut widths = vec![1 + rng.below(10) as usize];
    for _ in 0..dense {
        widths.push(1 + rng.below(10) as usize);
    }
    let mut specs = Vec::new();
    for l in 0..dense {
        let last = l + 1 == dense;
        let act = if last {
            Activation::Linear
        } else {
            Activation::Relu
        };
        specs.push(LayerSpec::dense(widths[l], widths[l + 1], act));
        if !last && rng.below(2) == 1 {
            specs.push(LayerSpec::dropout(0.5 * rng.next_f64()));
        }
    }
    let mut net = Network::init(&specs, seed).unwrap();
    let params = uniform(&mut rng, net.param_count(), -1.0, 1.0);
    net.set_parameters(&params).unwrap();
    let batch = 1 + rng.below(8) as usize;
    let x = Matrix::new(
        batch,
        widths[0],
        uniform(&mut rng, batch * widths[0], -1.0, 1.0),
    )
    .unwrap();
    let out = widths[dense];
    let t = Matrix::new(batch, out, uniform(&mut rng, batch * out, -1.0, 1.0)).unwrap();
    (net, x, t)
}

/// Compares backprop with central differences of the train-mode MSE. The
/// dropout masks are held fixed by reseeding the mask stream for every
/// evaluation.
pub fn gradient_check(
    net: &Network,
    x: &Matrix,
    t: &Matrix,
    mask_seed: u64,
    eps: f64,
) -> GradCheck {
    let loss = |n: &Network| {
        let (out, _) = n
            .forward(x, Mode::Train, &mut SeededRng::new(mask_seed))
            .unwrap();
        mse(&out, t).unwrap()
    };
    let (_, cache) = net
        .forward(x, Mode::Train, &mut SeededRng::new(mask_seed))
        .unwrap();
    let analytic = net.backward(&cache, t).unwrap().flatten();
    let base = net.parameters();
    let mut probe = net.clone();
    let mut worst = 0.0f64;
    for (i, &a) in analytic.iter().enumerate() {
        let mut p = base.clone();
        p[i] = base[i] + eps;
        probe.set_parameters(&p).unwrap();
        let up = loss(&probe);
        p[i] = base[i] - eps;
        probe.set_parameters(&p).unwrap();
        let down = loss(&probe);
        let numeric = (up - down) / (2.0 * eps);
        worst = worst.max(relative_error(a, numeric));
    }
    GradCheck {
        max_relative_error: worst,
        parameters: analytic.len(),
    }
}

/// Per-unit `(sample mean, standard error)` of train-mode outputs of a lone
/// dropout layer applied to `x` over `masks` independent draws.
pub fn dropout_expectation(x: &[f64], rate: f64, masks: usize, seed: u64) -> Vec<(f64, f64)> {
    use studentnet::nn::{DenseLayer, Layer};
    let w = x.len();
    let mut eye = vec![0.0; w * w];
    for i in 0..w {
        eye[i * w + i] = 1.0;
    }
    let identity = || {
        Layer::Dense(DenseLayer {
            weights: Matrix::new(w, w, eye.clone()).unwrap(),
            bias: vec![0.0; w],
            activation: Activation::Linear,
        })
    };
    let net =
        Network::from_layers(vec![identity(), Layer::Dropout { rate }, identity()], 0).unwrap();
    let batch = Matrix::new(masks, w, x.repeat(masks)).unwrap();
    let (out, _) = net
        .forward(&batch, Mode::Train, &mut SeededRng::new(seed))
        .unwrap();
    (0..w)
        .map(|c| {
            let col: Vec<f64> = (0..masks).map(|r| out.get(r, c)).collect();
            let m = col.iter().sum::<f64>() / masks as f64;
            let var = col.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (masks - 1) as f64;
            (m, (var / masks as f64).sqrt())
        })
        .collect()
}
