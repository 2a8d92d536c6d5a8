use serde::{Deserialize, Serialize};

use super::run::gather;
use super::{Result, TrainError};
use crate::dataset::{LabeledDataset, CLASS_COUNT};
use crate::nn::{argmax, Network};

/// Classification summary over one labeled partition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub n: usize,
    pub accuracy: f64,
    /// `confusion[true][predicted]`.
    pub confusion: [[usize; CLASS_COUNT]; CLASS_COUNT],
    /// 0 for a class that was never predicted.
    pub precision: [f64; CLASS_COUNT],
    /// 0 for a class absent from the labels.
    pub recall: [f64; CLASS_COUNT],
    /// Accuracy of always predicting the most frequent true class.
    pub majority_baseline: f64,
    pub majority_class: usize,
}

impl EvalReport {
    pub fn from_predictions(truth: &[usize], predicted: &[usize]) -> Result<Self> {
        if truth.is_empty() {
            return Err(TrainError::EmptyTestSet);
        }
        if truth.len() != predicted.len() {
            return Err(TrainError::InvalidConfig(format!(
                "{} labels but {} predictions",
                truth.len(),
                predicted.len()
            )));
        }
        let mut confusion = [[0usize; CLASS_COUNT]; CLASS_COUNT];
        for (&t, &p) in truth.iter().zip(predicted) {
            if t >= CLASS_COUNT || p >= CLASS_COUNT {
                return Err(TrainError::InvalidConfig(format!(
                    "class index {t}/{p} out of range"
                )));
            }
            confusion[t][p] += 1;
        }
        let n = truth.len();
        let correct: usize = (0..CLASS_COUNT).map(|c| confusion[c][c]).sum();
        let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
        let mut precision = [0.0; CLASS_COUNT];
        let mut recall = [0.0; CLASS_COUNT];
        let mut class_totals = [0usize; CLASS_COUNT];
        for c in 0..CLASS_COUNT {
            let predicted_c: usize = (0..CLASS_COUNT).map(|t| confusion[t][c]).sum();
            class_totals[c] = confusion[c].iter().sum();
            precision[c] = ratio(confusion[c][c], predicted_c);
            recall[c] = ratio(confusion[c][c], class_totals[c]);
        }
        let majority_class = argmax(&class_totals.map(|c| c as f64));
        Ok(Self {
            n,
            accuracy: ratio(correct, n),
            confusion,
            precision,
            recall,
            majority_baseline: ratio(class_totals[majority_class], n),
            majority_class,
        })
    }
}

/// Predicts every row of `test` (argmax of the inference output) and
/// summarizes against its labels.
pub fn evaluate(net: &Network, test: &LabeledDataset) -> Result<EvalReport> {
    if test.is_empty() {
        return Err(TrainError::EmptyTestSet);
    }
    if test.features().cols() != net.input_width() {
        return Err(TrainError::WidthMismatch {
            data: test.features().cols(),
            network: net.input_width(),
        });
    }
    let (x, _) = gather(test, &(0..test.len()).collect::<Vec<_>>())?;
    let out = net.infer(&x)?;
    let predicted: Vec<usize> = (0..out.rows()).map(|r| argmax(out.row(r))).collect();
    EvalReport::from_predictions(test.labels(), &predicted)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_predictor() {
        let truth = [0, 1, 2, 1, 1, 0];
        let r = EvalReport::from_predictions(&truth, &truth).unwrap();
        assert_eq!(r.accuracy, 1.0);
        assert_eq!(r.confusion, [[2, 0, 0], [0, 3, 0], [0, 0, 1]]);
        assert_eq!(r.precision, [1.0; 3]);
        assert_eq!(r.recall, [1.0; 3]);
    }

    #[test]
    fn majority_predictor_hits_baseline() {
        let truth = [0, 1, 2, 1, 1, 0, 1];
        let r = EvalReport::from_predictions(&truth, &[1; 7]).unwrap();
        assert_eq!(r.majority_class, 1);
        assert_eq!(r.accuracy, r.majority_baseline);
        assert_eq!(r.accuracy, 4.0 / 7.0);
        assert_eq!(r.precision[0], 0.0);
        assert_eq!(r.recall[1], 1.0);
    }

    #[test]
    fn confusion_sums_to_n() {
        let truth = [0, 0, 1, 2, 2, 2, 1];
        let pred = [1, 0, 1, 0, 2, 1, 2];
        let r = EvalReport::from_predictions(&truth, &pred).unwrap();
        assert_eq!(r.confusion.iter().flatten().sum::<usize>(), 7);
        let direct = truth.iter().zip(&pred).filter(|(a, b)| a == b).count() as f64 / 7.0;
        assert_eq!(r.accuracy, direct);
    }

    #[test]
    fn empty_rejected() {
        assert!(matches!(
            EvalReport::from_predictions(&[], &[]),
            Err(TrainError::EmptyTestSet)
        ));
    }
}
