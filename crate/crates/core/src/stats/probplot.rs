use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{check_finite, inverse_normal_cdf, mean, moments, EstimatorVariant, MomentSummary};
use super::{Result, StatsError};

/// Filliben's order-statistic medians for a sample of size `n`:
/// `1 - 0.5^(1/n)` at the first rank, `0.5^(1/n)` at the last and
/// `(i - 0.3175) / (n + 0.365)` in between.
pub fn filliben_positions(n: usize) -> Vec<f64> {
    let nf = n as f64;
    let last = 0.5f64.powf(1.0 / nf);
    (1..=n)
        .map(|i| {
            if i == n {
                last
            } else if i == 1 {
                1.0 - last
            } else {
                (i as f64 - 0.3175) / (nf + 0.365)
            }
        })
        .collect()
}

/// Normal probability plot data with its least-squares line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbPlot {
    pub theoretical_quantiles: Vec<f64>,
    pub ordered_sample: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    /// Correlation of the plotted points; 0 for a constant sample.
    pub r: f64,
    /// Side report of the sample's moments when they are defined.
    pub moments: Option<MomentSummary>,
}

/// The fitted line and diagnostics, without the point cloud.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbPlotFit {
    pub n: usize,
    pub slope: f64,
    pub intercept: f64,
    pub r: f64,
    pub moments: Option<MomentSummary>,
}

/// Sorts the sample, pairs it with `Φ⁻¹` of the Filliben positions and fits
/// `ordered = slope * quantile + intercept` by ordinary least squares.
pub fn probplot(column: &[f64]) -> Result<ProbPlot> {
    probplot_with(column, EstimatorVariant::default())
}

pub fn probplot_with(column: &[f64], variant: EstimatorVariant) -> Result<ProbPlot> {
    let n = column.len();
    if n < 2 {
        return Err(StatsError::TooFewSamples { needed: 2, got: n });
    }
    check_finite(column)?;
    let mut ordered = column.to_vec();
    ordered.sort_by(f64::total_cmp);
    let quantiles: Vec<f64> = filliben_positions(n)
        .into_iter()
        .map(inverse_normal_cdf)
        .collect();

    let (qm, ym) = (mean(&quantiles), mean(&ordered));
    let (mut sqq, mut sqy, mut syy) = (0.0, 0.0, 0.0);
    for (q, y) in quantiles.iter().zip(&ordered) {
        let (dq, dy) = (q - qm, y - ym);
        sqq += dq * dq;
        sqy += dq * dy;
        syy += dy * dy;
    }
    let slope = sqy / sqq;
    let intercept = ym - slope * qm;
    let r = if syy == 0.0 {
        0.0
    } else {
        (sqy / (sqq * syy).sqrt()).clamp(-1.0, 1.0)
    };
    Ok(ProbPlot {
        theoretical_quantiles: quantiles,
        moments: moments(&ordered, variant).ok(),
        ordered_sample: ordered,
        slope,
        intercept,
        r,
    })
}

impl ProbPlot {
    pub fn fit(&self) -> ProbPlotFit {
        ProbPlotFit {
            n: self.ordered_sample.len(),
            slope: self.slope,
            intercept: self.intercept,
            r: self.r,
            moments: self.moments.clone(),
        }
    }

    /// Two columns, `theoretical_quantile,ordered_value`, one line per point.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "theoretical_quantile,ordered_value")?;
        for (q, y) in self.theoretical_quantiles.iter().zip(&self.ordered_sample) {
            writeln!(out, "{q},{y}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn three_point_positions() {
        let m = filliben_positions(3);
        let last = 0.5f64.powf(1.0 / 3.0);
        assert_eq!(m, vec![1.0 - last, 0.5, last]);
        assert!((m[0] - 0.2063).abs() < 1e-4 && (m[2] - 0.7937).abs() < 1e-4);
    }

    #[test]
    fn fixed_point_of_the_fit() {
        let q: Vec<f64> = filliben_positions(25)
            .into_iter()
            .map(inverse_normal_cdf)
            .collect();
        let p = probplot(&q).unwrap();
        assert!((p.slope - 1.0).abs() < 1e-9);
        assert!(p.intercept.abs() < 1e-9);
        assert!((p.r - 1.0).abs() < 1e-9);
    }

    #[test]
    fn quantiles_increase_and_sample_sorted() {
        let p = probplot(&[3.0, 1.0, 2.0, 2.0, 9.0]).unwrap();
        assert!(p.theoretical_quantiles.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(p.ordered_sample, vec![1.0, 2.0, 2.0, 3.0, 9.0]);
    }

    #[test]
    fn small_and_constant_samples() {
        assert_eq!(
            probplot(&[1.0]),
            Err(StatsError::TooFewSamples { needed: 2, got: 1 })
        );
        let p = probplot(&[4.0, 4.0, 4.0]).unwrap();
        assert_eq!((p.slope, p.intercept, p.r), (0.0, 4.0, 0.0));
        assert!(p.moments.is_none());
    }

    #[test]
    fn csv_layout() {
        let p = probplot(&[1.0, 2.0]).unwrap();
        let mut buf = Vec::new();
        p.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.starts_with("theoretical_quantile,ordered_value\n"));
    }

    proptest! {
        #[test]
        fn affine_equivariance(
            xs in prop::collection::vec(-50.0f64..50.0, 3..60),
            scale in 0.1f64..10.0,
            shift in -100.0f64..100.0,
        ) {
            let base = probplot(&xs).unwrap();
            prop_assume!(base.r > 0.0);
            let moved: Vec<f64> = xs.iter().map(|x| scale * x + shift).collect();
            let p = probplot(&moved).unwrap();
            prop_assert!((p.r - base.r).abs() < 1e-9);
            prop_assert!((p.slope - scale * base.slope).abs() < 1e-8 * (1.0 + p.slope.abs()));
            prop_assert!(
                (p.intercept - (scale * base.intercept + shift)).abs()
                    < 1e-8 * (1.0 + p.intercept.abs())
            );
            prop_assert!((-1.0..=1.0).contains(&p.r));
        }
    }
}
