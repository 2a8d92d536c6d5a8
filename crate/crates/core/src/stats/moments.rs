use serde::{Deserialize, Serialize};

use super::{check_finite, mean, Result, StatsError};

/// Which moment estimators a [`MomentSummary`] holds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorVariant {
    /// Plain central-moment ratios: population std, `g1 = m3 / m2^1.5`,
    /// `g2 = m4 / m2^2 - 3`.
    #[default]
    Biased,
    /// Sample std (n - 1), adjusted skewness `G1` and adjusted excess
    /// kurtosis `G2`.
    BiasCorrected,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentSummary {
    pub n: usize,
    pub mean: f64,
    pub std: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
    pub estimator_variant: EstimatorVariant,
}

/// Mean, standard deviation, skewness and excess kurtosis of `column`.
///
/// Needs at least three values and a non-constant column.
pub fn moments(column: &[f64], variant: EstimatorVariant) -> Result<MomentSummary> {
    let n = column.len();
    if n < 3 {
        return Err(StatsError::TooFewSamples { needed: 3, got: n });
    }
    check_finite(column)?;
    let mu = mean(column);
    let (mut s2, mut s3, mut s4) = (0.0, 0.0, 0.0);
    for &x in column {
        let d = x - mu;
        let d2 = d * d;
        s2 += d2;
        s3 += d2 * d;
        s4 += d2 * d2;
    }
    let nf = n as f64;
    let (m2, m3, m4) = (s2 / nf, s3 / nf, s4 / nf);
    if m2 == 0.0 {
        return Err(StatsError::ConstantColumn);
    }
    let g1 = m3 / m2.powf(1.5);
    let g2 = m4 / (m2 * m2) - 3.0;

    let (std, skewness, excess_kurtosis) = match variant {
        EstimatorVariant::Biased => (m2.sqrt(), g1, g2),
        EstimatorVariant::BiasCorrected => {
            if n < 4 {
                return Err(StatsError::TooFewSamples { needed: 4, got: n });
            }
            let skew = g1 * (nf * (nf - 1.0)).sqrt() / (nf - 2.0);
            let kurt = ((nf + 1.0) * g2 + 6.0) * (nf - 1.0) / ((nf - 2.0) * (nf - 3.0));
            ((s2 / (nf - 1.0)).sqrt(), skew, kurt)
        }
    };
    Ok(MomentSummary {
        n,
        mean: mu,
        std,
        skewness,
        excess_kurtosis,
        estimator_variant: variant,
    })
}
