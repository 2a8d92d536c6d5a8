//! Configuration and end-to-end orchestration shared by the CLI and tests.
//!
//! [`run`] goes from parsed records to a trained network and a test-set
//! report. Everything needed to repeat the same preprocessing on new data
//! (encoding scheme, grade bins, feature columns, scaler, split manifest) is
//! kept in a [`Preprocess`] record that is saved next to the model.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::{
    self, schema, DataMatrix, DatasetError, EncodingScheme, GradeBins, LabeledDataset,
    MinMaxScaler, RawStudentRecord, SplitDataset, SplitManifest,
};
use crate::nn::{self, reference_architecture, NetError, Network};
use crate::stats::{
    self, correlation_matrix, select_features, Aggregation, EstimatorVariant, FeatureRanking,
    RankingMode, StatsError,
};
use crate::train::{
    self, export_history, EarlyStop, EvalReport, TrainConfig, TrainError, TrainingHistory,
};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error(transparent)]
    Net(#[from] NetError),
    #[error(transparent)]
    Train(#[from] TrainError),
    #[error("invalid config: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
}

pub type Result<T, E = PipelineError> = std::result::Result<T, E>;

/// Which attributes feed the network.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureMode {
    /// All 30 attributes.
    #[default]
    All30,
    /// The top `selected_k` attributes by correlation with G3 on the
    /// training rows.
    Selected,
}

/// Candidate columns for correlation ranking.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionScope {
    /// The 13 integer-valued attributes.
    #[default]
    Numeric,
    /// All 30 attributes, categorical ones by ordinal code.
    All,
}

impl SelectionScope {
    pub fn columns(self) -> Vec<&'static str> {
        match self {
            SelectionScope::Numeric => schema::integer_attribute_names().collect(),
            SelectionScope::All => schema::attribute_names().collect(),
        }
    }
}

/// Flat JSON configuration. Missing keys take the defaults below; unknown
/// keys are rejected.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub data: Option<PathBuf>,
    pub out: PathBuf,
    pub scheme_version: String,
    pub pass_from: i64,
    pub excellent_from: i64,
    pub train_ratio: f64,
    /// Fraction of the training block held out for validation curves.
    pub validation_ratio: f64,
    /// Drives the split, weight initialization, shuffles and dropout.
    pub seed: u64,
    pub batch_size: usize,
    pub max_epochs: usize,
    pub learning_rate: f64,
    pub loss_threshold: Option<f64>,
    pub patience: Option<usize>,
    pub scaling: bool,
    pub feature_mode: FeatureMode,
    pub selected_k: usize,
    pub selection_mode: RankingMode,
    pub selection_scope: SelectionScope,
    pub dropout: [f64; 4],
    pub estimator: EstimatorVariant,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        let t = TrainConfig::default();
        Self {
            data: None,
            out: PathBuf::from("out"),
            scheme_version: EncodingScheme::ALPHABETICAL_V1.to_owned(),
            pass_from: GradeBins::default().pass_from,
            excellent_from: GradeBins::default().excellent_from,
            train_ratio: 0.7,
            validation_ratio: 0.2,
            seed: t.seed,
            batch_size: t.batch_size,
            max_epochs: t.max_epochs,
            learning_rate: t.learning_rate,
            loss_threshold: None,
            patience: None,
            scaling: true,
            feature_mode: FeatureMode::All30,
            selected_k: 7,
            selection_mode: RankingMode::SignedDesc,
            selection_scope: SelectionScope::Numeric,
            dropout: [nn::DEFAULT_DROPOUT; 4],
            estimator: EstimatorVariant::Biased,
        }
    }
}

impl PipelineConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| PipelineError::Io {
            path: path.to_owned(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| PipelineError::Json {
            path: path.to_owned(),
            source,
        })
    }

    pub fn bins(&self) -> Result<GradeBins> {
        Ok(GradeBins::new(self.pass_from, self.excellent_from)?)
    }

    pub fn train_config(&self) -> Result<TrainConfig> {
        let early_stop = match (self.loss_threshold, self.patience) {
            (None, None) => EarlyStop::None,
            (Some(t), None) => EarlyStop::LossThreshold(t),
            (None, Some(p)) => EarlyStop::Patience(p),
            (Some(_), Some(_)) => {
                return Err(PipelineError::Config(
                    "set at most one of loss_threshold and patience".into(),
                ))
            }
        };
        Ok(TrainConfig {
            batch_size: self.batch_size,
            max_epochs: self.max_epochs,
            learning_rate: self.learning_rate,
            seed: self.seed,
            early_stop,
        })
    }

    /// Checks every field without touching the filesystem.
    pub fn validate(&self) -> Result<()> {
        EncodingScheme::for_version(&self.scheme_version)?;
        self.bins()?;
        if !(self.train_ratio > 0.0 && self.train_ratio < 1.0) {
            return Err(PipelineError::Config(format!(
                "train_ratio {} not in (0, 1)",
                self.train_ratio
            )));
        }
        if !(0.0..1.0).contains(&self.validation_ratio) {
            return Err(PipelineError::Config(format!(
                "validation_ratio {} not in [0, 1)",
                self.validation_ratio
            )));
        }
        if let Some(bad) = self.dropout.iter().find(|r| !(0.0..1.0).contains(*r)) {
            return Err(PipelineError::Config(format!(
                "dropout rate {bad} not in [0, 1)"
            )));
        }
        if self.feature_mode == FeatureMode::Selected {
            let available = self.selection_scope.columns().len();
            if self.selected_k == 0 || self.selected_k > available {
                return Err(PipelineError::Config(format!(
                    "selected_k {} not in 1..={available}",
                    self.selected_k
                )));
            }
        }
        self.train_config()?.validate()?;
        Ok(())
    }

    pub fn data_path(&self) -> Result<&Path> {
        self.data
            .as_deref()
            .ok_or_else(|| PipelineError::Config("no dataset path given".into()))
    }
}

/// Reads and schema-checks a dataset file (`;` or `,` separated).
pub fn load_records(path: &Path) -> Result<Vec<RawStudentRecord>> {
    let file = File::open(path).map_err(|source| PipelineError::Io {
        path: path.to_owned(),
        source,
    })?;
    Ok(dataset::parse_csv_auto(std::io::BufReader::new(file))?)
}

/// Ranks `scope` columns by correlation with G3 on the given encoded rows.
/// G1, G2 and G3 head the listing.
pub fn rank_features(
    encoded: &DataMatrix,
    scope: SelectionScope,
    mode: RankingMode,
    aggregation: Aggregation,
    k: usize,
) -> Result<FeatureRanking> {
    let mut columns = scope.columns();
    columns.extend(schema::GRADE_COLUMNS);
    let corr = correlation_matrix(&encoded.select(&columns)?)?;
    Ok(select_features(
        &corr,
        &schema::GRADE_COLUMNS,
        mode,
        aggregation,
        k,
    )?)
}

/// The preprocessing applied before training, replayable on other data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Preprocess {
    pub scheme_version: String,
    pub bins: GradeBins,
    /// Network inputs, in order.
    pub feature_columns: Vec<String>,
    pub scaler: Option<MinMaxScaler>,
    /// Present when features were chosen by correlation ranking.
    pub selection: Option<FeatureRanking>,
    pub split: SplitManifest,
}

impl Preprocess {
    /// Splits the encoded table, then fits feature selection and scaling on
    /// the training rows only.
    pub fn fit(encoded: &DataMatrix, cfg: &PipelineConfig) -> Result<Self> {
        let bins = cfg.bins()?;
        let labeled = LabeledDataset::from_encoded(encoded, &bins)?;
        let raw = dataset::split(&labeled, cfg.train_ratio, cfg.validation_ratio, cfg.seed)?;
        let train_rows = encoded.take_rows(raw.train.row_ids());

        let selection = match cfg.feature_mode {
            FeatureMode::All30 => None,
            FeatureMode::Selected => Some(rank_features(
                &train_rows,
                cfg.selection_scope,
                cfg.selection_mode,
                Aggregation::SingleTarget("G3".into()),
                cfg.selected_k,
            )?),
        };
        let feature_columns: Vec<String> = match &selection {
            Some(s) => s.feature_names().into_iter().map(str::to_owned).collect(),
            None => schema::attribute_names().map(str::to_owned).collect(),
        };
        let scaler = if cfg.scaling {
            let names: Vec<&str> = feature_columns.iter().map(String::as_str).collect();
            Some(MinMaxScaler::fit(&raw.train.features().select(&names)?)?)
        } else {
            None
        };
        Ok(Self {
            scheme_version: cfg.scheme_version.clone(),
            bins,
            feature_columns,
            scaler,
            selection,
            split: raw.manifest(),
        })
    }

    pub fn scheme(&self) -> Result<EncodingScheme> {
        Ok(EncodingScheme::for_version(&self.scheme_version)?)
    }

    /// Column selection and scaling for any matrix holding the attributes.
    pub fn transform_features(&self, attributes: &DataMatrix) -> Result<DataMatrix> {
        let names: Vec<&str> = self.feature_columns.iter().map(String::as_str).collect();
        let picked = attributes.select(&names)?;
        Ok(match &self.scaler {
            Some(s) => s.transform(&picked)?,
            None => picked,
        })
    }

    /// Labels, splits by the manifest and transforms an encoded table.
    pub fn apply(&self, encoded: &DataMatrix) -> Result<SplitDataset> {
        let labeled = LabeledDataset::from_encoded(encoded, &self.bins)?;
        let mut split = self.split.apply(&labeled)?;
        for part in [&mut split.train, &mut split.validation, &mut split.test] {
            let features = self.transform_features(part.features())?;
            *part = part.with_features(features)?;
        }
        Ok(split)
    }
}

pub struct TrainOutcome {
    /// All rows after ordinal encoding, grades included.
    pub encoded: DataMatrix,
    pub network: Network,
    pub history: TrainingHistory,
    pub report: EvalReport,
    pub preprocess: Preprocess,
}

/// Encodes, splits, selects, scales, trains the reference architecture and
/// evaluates it on the test partition.
pub fn run(records: &[RawStudentRecord], cfg: &PipelineConfig) -> Result<TrainOutcome> {
    cfg.validate()?;
    let scheme = EncodingScheme::for_version(&cfg.scheme_version)?;
    let encoded = dataset::encode(records, &scheme)?;
    let preprocess = Preprocess::fit(&encoded, cfg)?;
    let split = preprocess.apply(&encoded)?;
    let specs = reference_architecture(preprocess.feature_columns.len(), cfg.dropout);
    let initial = Network::init(&specs, cfg.seed)?;
    let (network, history) = train::train(&initial, &split, &cfg.train_config()?)?;
    let report = train::evaluate(&network, &split.test)?;
    Ok(TrainOutcome {
        encoded,
        network,
        history,
        report,
        preprocess,
    })
}

pub const MODEL_FILE: &str = "model.json";
pub const HISTORY_FILE: &str = "history.csv";
pub const PREPROCESS_FILE: &str = "preprocess.json";
pub const SPLIT_FILE: &str = "split.json";
pub const EVALUATION_FILE: &str = "evaluation.json";
pub const ENCODED_FILE: &str = "encoded.csv";

/// Writes model, history, preprocessing record, split manifest, test report
/// and the encoded table into `dir`, creating it if needed. Returns the
/// written paths.
pub fn save_outcome(outcome: &TrainOutcome, dir: &Path) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let model = dir.join(MODEL_FILE);
    write_with(&model, |w| {
        nn::save_network(&outcome.network, w).map_err(PipelineError::from)
    })?;
    let history = dir.join(HISTORY_FILE);
    write_with(&history, |w| {
        export_history(&outcome.history, w).map_err(PipelineError::from)
    })?;
    let preprocess = dir.join(PREPROCESS_FILE);
    write_json(&preprocess, &outcome.preprocess)?;
    let split = dir.join(SPLIT_FILE);
    write_json(&split, &outcome.preprocess.split)?;
    let evaluation = dir.join(EVALUATION_FILE);
    write_json(&evaluation, &outcome.report)?;
    let encoded = dir.join(ENCODED_FILE);
    write_with(&encoded, |w| {
        outcome.encoded.write_csv(w).map_err(PipelineError::from)
    })?;
    Ok(vec![model, history, preprocess, split, evaluation, encoded])
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|source| PipelineError::Io {
        path: dir.to_owned(),
        source,
    })
}

/// Creates `path` and hands a buffered writer to `body`.
pub fn write_with<F>(path: &Path, body: F) -> Result<()>
where
    F: FnOnce(&mut BufWriter<File>) -> Result<()>,
{
    let io_err = |source| PipelineError::Io {
        path: path.to_owned(),
        source,
    };
    let mut w = BufWriter::new(File::create(path).map_err(io_err)?);
    body(&mut w)?;
    w.flush().map_err(io_err)
}

/// Pretty JSON plus a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_with(path, |w| {
        serde_json::to_writer_pretty(&mut *w, value).map_err(|source| PipelineError::Json {
            path: path.to_owned(),
            source,
        })?;
        w.write_all(b"\n").map_err(|source| PipelineError::Io {
            path: path.to_owned(),
            source,
        })
    })
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|source| PipelineError::Io {
        path: path.to_owned(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| PipelineError::Json {
        path: path.to_owned(),
        source,
    })
}

/// Moment summaries of named columns of an encoded table.
pub fn column_moments(
    encoded: &DataMatrix,
    columns: &[&str],
    variant: EstimatorVariant,
) -> Result<Vec<(String, stats::MomentSummary)>> {
    columns
        .iter()
        .map(|&c| {
            let col = encoded
                .column(c)
                .ok_or_else(|| DatasetError::UnknownColumn(c.to_owned()))?;
            Ok((c.to_owned(), stats::moments(&col, variant)?))
        })
        .collect()
}
