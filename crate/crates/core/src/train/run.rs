use super::{EarlyStop, EpochRecord, Result, StopReason, TrainConfig, TrainError, TrainingHistory};
use crate::dataset::{LabeledDataset, SplitDataset, CLASS_COUNT};
use crate::nn::{mae, mse, Matrix, Mode, Network};
use crate::rng::SeededRng;

/// A fresh seeded permutation of `0..n` cut into batches of `batch_size`;
/// the last batch may be short.
pub fn epoch_batches(n: usize, batch_size: usize, rng: &mut SeededRng) -> Vec<Vec<usize>> {
    rng.permutation(n)
        .chunks(batch_size.max(1))
        .map(<[usize]>::to_vec)
        .collect()
}

/// Feature rows and one-hot targets of `rows` as network-ready matrices.
pub(crate) fn gather(ds: &LabeledDataset, rows: &[usize]) -> Result<(Matrix, Matrix)> {
    let width = ds.features().cols();
    let mut x = Vec::with_capacity(rows.len() * width);
    let mut y = Vec::with_capacity(rows.len() * CLASS_COUNT);
    for &r in rows {
        x.extend_from_slice(ds.features().row(r));
        y.extend_from_slice(&ds.one_hot(r));
    }
    Ok((
        Matrix::new(rows.len(), width, x)?,
        Matrix::new(rows.len(), CLASS_COUNT, y)?,
    ))
}

fn all_rows(ds: &LabeledDataset) -> Result<(Matrix, Matrix)> {
    gather(ds, &(0..ds.len()).collect::<Vec<_>>())
}

fn metrics(net: &Network, data: &(Matrix, Matrix)) -> Result<(f64, f64)> {
    let out = net.infer(&data.0)?;
    Ok((mse(&out, &data.1)?, mae(&out, &data.1)?))
}

/// Trains a copy of `net` on `split.train`.
///
/// Each epoch shuffles the training rows, runs forward (train mode),
/// backward and an SGD step per batch, then records loss and MAE from
/// inference-mode passes over the training and validation sets. Shuffles and
/// dropout masks come from one `SeededRng::new(cfg.seed)` stream, so the
/// result is a pure function of `(net, split, cfg)`.
pub fn train(
    net: &Network,
    split: &SplitDataset,
    cfg: &TrainConfig,
) -> Result<(Network, TrainingHistory)> {
    cfg.validate()?;
    let train_set = &split.train;
    if train_set.is_empty() {
        return Err(TrainError::EmptyTrainingSet);
    }
    let width = train_set.features().cols();
    if width != net.input_width() || net.output_width() != CLASS_COUNT {
        return Err(TrainError::WidthMismatch {
            data: width,
            network: net.input_width(),
        });
    }
    let has_validation = !split.validation.is_empty();
    if matches!(cfg.early_stop, EarlyStop::Patience(_)) && !has_validation {
        return Err(TrainError::NoValidationSet);
    }

    let train_all = all_rows(train_set)?;
    let val_all = if has_validation {
        Some(all_rows(&split.validation)?)
    } else {
        None
    };

    let mut net = net.clone();
    let mut rng = SeededRng::new(cfg.seed);
    let mut epochs = Vec::with_capacity(cfg.max_epochs);
    let mut batches = 0;
    let mut best_val = f64::INFINITY;
    let mut since_best = 0;
    let mut stop_reason = StopReason::EpochCap;

    for epoch in 1..=cfg.max_epochs {
        for rows in epoch_batches(train_set.len(), cfg.batch_size, &mut rng) {
            let (x, y) = gather(train_set, &rows)?;
            let (_, cache) = net.forward(&x, Mode::Train, &mut rng)?;
            if cfg.learning_rate > 0.0 {
                let grads = net.backward(&cache, &y)?;
                net.sgd_step(&grads, cfg.learning_rate)?;
            }
            batches += 1;
        }

        let (train_loss, train_mae) = metrics(&net, &train_all)?;
        let val = val_all.as_ref().map(|v| metrics(&net, v)).transpose()?;
        let finite = train_loss.is_finite()
            && train_mae.is_finite()
            && val.is_none_or(|(l, m)| l.is_finite() && m.is_finite());
        if !finite {
            return Err(TrainError::Diverged(epoch));
        }
        epochs.push(EpochRecord {
            epoch,
            train_loss,
            train_mae,
            val_loss: val.map(|v| v.0),
            val_mae: val.map(|v| v.1),
        });

        match cfg.early_stop {
            EarlyStop::None => {}
            EarlyStop::LossThreshold(tau) => {
                if train_loss <= tau {
                    stop_reason = StopReason::LossThreshold;
                    break;
                }
            }
            EarlyStop::Patience(p) => {
                let v = val.map_or(f64::INFINITY, |v| v.0);
                if v < best_val {
                    best_val = v;
                    since_best = 0;
                } else {
                    since_best += 1;
                    if since_best >= p {
                        stop_reason = StopReason::Patience;
                        break;
                    }
                }
            }
        }
    }

    Ok((
        net,
        TrainingHistory {
            epochs,
            stop_reason,
            batches,
        },
    ))
}
