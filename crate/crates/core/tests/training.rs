mod common;

use studentnet::dataset::{self, synthetic, EncodingScheme, GradeBins, LabeledDataset};
use studentnet::nn::{reference_architecture, Network};
use studentnet::pipeline::{self, PipelineConfig};
use studentnet::rng::SeededRng;
use studentnet::train::{
    epoch_batches, export_history, parse_history, train, StopReason, TrainConfig,
};

fn synthetic_split(n: usize) -> dataset::SplitDataset {
    let records = synthetic::generate(n, 21);
    let encoded = dataset::encode(&records, &EncodingScheme::alphabetical()).unwrap();
    let labeled = LabeledDataset::from_encoded(&encoded, &GradeBins::default()).unwrap();
    let raw = dataset::split(&labeled, 0.7, 0.0, 42).unwrap();
    let (train_x, rest, _) = dataset::scale_features(
        raw.train.features(),
        &[raw.validation.features(), raw.test.features()],
    )
    .unwrap();
    dataset::SplitDataset {
        train: raw.train.with_features(train_x).unwrap(),
        validation: raw.validation.with_features(rest[0].clone()).unwrap(),
        test: raw.test.with_features(rest[1].clone()).unwrap(),
        ..raw
    }
}

#[test]
fn one_epoch_on_277_rows_is_35_updates() {
    let split = synthetic_split(395);
    assert_eq!(split.train.len(), 277);
    let net = Network::init(&reference_architecture(30, [0.2; 4]), 42).unwrap();
    let cfg = TrainConfig {
        max_epochs: 1,
        ..TrainConfig::default()
    };
    let (_, history) = train(&net, &split, &cfg).unwrap();
    assert_eq!(history.batches, 35);
    assert_eq!(history.epochs.len(), 1);
    assert_eq!(history.stop_reason, StopReason::EpochCap);
    assert!(history.epochs[0].val_loss.is_none());
}

#[test]
fn identical_seeds_give_bitwise_identical_runs() {
    let split = synthetic_split(200);
    let net = Network::init(&reference_architecture(30, [0.2; 4]), 9).unwrap();
    let cfg = TrainConfig {
        max_epochs: 20,
        ..TrainConfig::default()
    };
    let (a, ha) = train(&net, &split, &cfg).unwrap();
    let (b, hb) = train(&net, &split, &cfg).unwrap();
    assert_eq!(
        a.parameters()
            .iter()
            .map(|p| p.to_bits())
            .collect::<Vec<_>>(),
        b.parameters()
            .iter()
            .map(|p| p.to_bits())
            .collect::<Vec<_>>()
    );
    assert_eq!(ha, hb);
    let other = TrainConfig { seed: 10, ..cfg };
    let (c, _) = train(&net, &split, &other).unwrap();
    assert_ne!(a, c);
}

#[test]
fn history_csv_round_trips_and_reads_as_numbers() {
    let split = synthetic_split(120);
    let net = Network::init(&reference_architecture(30, [0.2; 4]), 1).unwrap();
    let cfg = TrainConfig {
        max_epochs: 3,
        ..TrainConfig::default()
    };
    let (_, history) = train(&net, &split, &cfg).unwrap();
    let mut buf = Vec::new();
    export_history(&history, &mut buf).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert_eq!(parse_history(buf.as_slice()).unwrap(), history.epochs);

    let mut reader = csv::Reader::from_reader(buf.as_slice());
    for (i, row) in reader.records().enumerate() {
        let row = row.unwrap();
        assert_eq!(row[0].parse::<usize>().unwrap(), i + 1);
        assert!(row[1].parse::<f64>().unwrap().is_finite());
        assert!(row[2].parse::<f64>().unwrap().is_finite());
    }
}

#[test]
fn first_batch_membership_is_uniform() {
    let (n, batch, trials) = (20usize, 8usize, 4000u64);
    let mut counts = vec![0u64; n];
    for seed in 0..trials {
        let batches = epoch_batches(n, batch, &mut SeededRng::new(seed));
        for &i in &batches[0] {
            counts[i] += 1;
        }
    }
    let p = batch as f64 / n as f64;
    let expected = trials as f64 * p;
    let sigma = (trials as f64 * p * (1.0 - p)).sqrt();
    for (i, &c) in counts.iter().enumerate() {
        assert!(
            (c as f64 - expected).abs() <= 3.0 * sigma,
            "row {i}: {c} vs {expected}"
        );
    }
}

#[test]
fn synthetic_end_to_end_learns() {
    let records = synthetic::generate(395, 7);
    let cfg = PipelineConfig::default();
    let outcome = pipeline::run(&records, &cfg).unwrap();
    let h = &outcome.history;
    assert_eq!(h.epochs.len(), 500);
    assert!(h.last().unwrap().train_loss < h.first().unwrap().train_loss);
    assert!(outcome.report.accuracy > outcome.report.majority_baseline);
    assert_eq!(outcome.report.n, 118);
}
