use std::io::{BufRead, BufReader, Read, Write};

use serde::{Deserialize, Serialize};

use super::{Result, TrainError};

/// Metrics recorded after one epoch, from inference-mode passes.
///
/// Validation fields are `None` when the split has no validation rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    pub train_loss: f64,
    pub train_mae: f64,
    pub val_loss: Option<f64>,
    pub val_mae: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    EpochCap,
    LossThreshold,
    Patience,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainingHistory {
    pub epochs: Vec<EpochRecord>,
    pub stop_reason: StopReason,
    /// Mini-batches processed over the whole run.
    pub batches: usize,
}

impl TrainingHistory {
    pub fn first(&self) -> Option<&EpochRecord> {
        self.epochs.first()
    }

    pub fn last(&self) -> Option<&EpochRecord> {
        self.epochs.last()
    }
}

const HEADER: &str = "epoch,train_loss,train_mae,val_loss,val_mae";

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// CSV with columns `epoch,train_loss,train_mae,val_loss,val_mae`; missing
/// validation metrics are empty cells. Values use shortest round-trip
/// formatting.
pub fn export_history<W: Write>(history: &TrainingHistory, mut out: W) -> Result<()> {
    if history.epochs.is_empty() {
        return Err(TrainError::EmptyHistory);
    }
    writeln!(out, "{HEADER}")?;
    for r in &history.epochs {
        writeln!(
            out,
            "{},{},{},{},{}",
            r.epoch,
            r.train_loss,
            r.train_mae,
            opt(r.val_loss),
            opt(r.val_mae)
        )?;
    }
    Ok(())
}

/// Reads back what [`export_history`] wrote.
pub fn parse_history<R: Read>(source: R) -> Result<Vec<EpochRecord>> {
    let mut lines = BufReader::new(source).lines();
    match lines.next().transpose()? {
        Some(h) if h.trim() == HEADER => {}
        other => {
            return Err(TrainError::MalformedHistory(format!(
                "bad header {other:?}"
            )));
        }
    }
    let bad = |line: &str| TrainError::MalformedHistory(format!("bad line {line:?}"));
    let mut out = Vec::new();
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 5 {
            return Err(bad(&line));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad(&line));
        let maybe = |s: &str| {
            if s.is_empty() {
                Ok(None)
            } else {
                num(s).map(Some)
            }
        };
        out.push(EpochRecord {
            epoch: cells[0].parse().map_err(|_| bad(&line))?,
            train_loss: num(cells[1])?,
            train_mae: num(cells[2])?,
            val_loss: maybe(cells[3])?,
            val_mae: maybe(cells[4])?,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn history() -> TrainingHistory {
        TrainingHistory {
            epochs: (1..=3)
                .map(|e| EpochRecord {
                    epoch: e,
                    train_loss: 1.0 / (e as f64 * 3.0),
                    train_mae: 0.1 + 1e-17 * e as f64,
                    val_loss: Some(std::f64::consts::PI / e as f64),
                    val_mae: if e == 2 { None } else { Some(0.3) },
                })
                .collect(),
            stop_reason: StopReason::EpochCap,
            batches: 3,
        }
    }

    #[test]
    fn header_plus_one_line_per_epoch() {
        let mut buf = Vec::new();
        export_history(&history(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert_eq!(text.lines().next(), Some(HEADER));
    }

    #[test]
    fn round_trip_exact() {
        let h = history();
        let mut buf = Vec::new();
        export_history(&h, &mut buf).unwrap();
        assert_eq!(parse_history(buf.as_slice()).unwrap(), h.epochs);
    }

    #[test]
    fn readable_by_a_generic_csv_reader() {
        let mut buf = Vec::new();
        export_history(&history(), &mut buf).unwrap();
        let mut reader = csv::Reader::from_reader(buf.as_slice());
        assert_eq!(reader.headers().unwrap().len(), 5);
        for rec in reader.records() {
            let rec = rec.unwrap();
            assert!(rec[1].parse::<f64>().is_ok());
        }
    }

    #[test]
    fn empty_history_refused() {
        let h = TrainingHistory {
            epochs: vec![],
            stop_reason: StopReason::EpochCap,
            batches: 0,
        };
        assert!(matches!(
            export_history(&h, Vec::new()),
            Err(TrainError::EmptyHistory)
        ));
    }
}
