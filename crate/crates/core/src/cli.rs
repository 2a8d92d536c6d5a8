//! The `studentnet` command line.
//!
//! Settings resolve as flags > `--config` JSON file > defaults. Every output
//! file goes into the `--out` directory and is rewritten byte for byte on a
//! rerun with the same inputs. Failures print one line to stderr:
//!
//! ```text
//! studentnet: error[<exit code>:<kind>]: <message>
//! ```
//!
//! | exit | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | I/O failure while writing outputs |
//! | 2 | dataset, model or config file could not be parsed |
//! | 3 | bad argument (unknown column, k too large, invalid setting, missing file) |
//! | 4 | statistical precondition (too few samples, constant column) |
//! | 5 | model mismatch (format version, layer shapes, feature width) |
//! | 6 | empty partition |

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::dataset::{self, schema, DataMatrix, DatasetError, CLASS_NAMES};
use crate::nn::{self, NetError, Network};
use crate::pipeline::{
    self, FeatureMode, PipelineConfig, PipelineError, Preprocess, SelectionScope,
};
use crate::stats::{
    self, Aggregation, EstimatorVariant, FeatureRanking, MomentSummary, RankingMode, StatsError,
    REFERENCE_FEATURES,
};
use crate::train::{self, TrainError};

#[derive(Parser, Debug)]
#[command(
    name = "studentnet",
    version,
    about = "Student performance statistics and MLP training"
)]
pub struct Cli {
    /// Dataset CSV (`;` or `,` separated, UCI column names).
    #[arg(long, global = true)]
    pub data: Option<PathBuf>,
    /// JSON config file with flat keys.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Mean, std, skewness and excess kurtosis per column.
    Stats {
        /// Column to summarize (repeatable). Default: all numeric columns.
        #[arg(long = "col")]
        cols: Vec<String>,
        #[arg(long, value_enum)]
        variant: Option<VariantArg>,
    },
    /// Normal probability plot data for one column.
    Probplot {
        #[arg(long = "col")]
        col: String,
        #[arg(long, value_enum)]
        variant: Option<VariantArg>,
    },
    /// Pearson correlation matrix of all encoded columns.
    Corr,
    /// Rank attributes by correlation with the grades.
    Select {
        #[arg(long, value_enum, default_value_t = ModeArg::Signed)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = AggregationArg::Single)]
        aggregation: AggregationArg,
        /// Scoring column for `--aggregation single`.
        #[arg(long, default_value = "G3")]
        target: String,
        #[arg(long, default_value_t = 7)]
        k: usize,
        #[arg(long, value_enum, default_value_t = ScopeArg::Numeric)]
        scope: ScopeArg,
    },
    /// Train the reference network and evaluate it on the test partition.
    Train {
        #[arg(long)]
        epochs: Option<usize>,
        #[arg(long)]
        batch_size: Option<usize>,
        #[arg(long)]
        learning_rate: Option<f64>,
        #[arg(long, value_enum, alias = "features")]
        feature_mode: Option<FeatureModeArg>,
        #[arg(long)]
        no_scaling: bool,
    },
    /// Evaluate a saved model on one partition of its recorded split.
    Evaluate {
        /// Default: `<out>/model.json`.
        #[arg(long)]
        model: Option<PathBuf>,
        /// Default: `<out>/preprocess.json`.
        #[arg(long)]
        preprocess: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = PartitionArg::Test)]
        partition: PartitionArg,
    },
    /// Predict grade classes for rows of attributes.
    Predict {
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long)]
        preprocess: Option<PathBuf>,
        /// CSV of attribute rows; grade columns, if present, are ignored.
        #[arg(long)]
        rows: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum VariantArg {
    Biased,
    BiasCorrected,
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum)]
pub enum ModeArg {
    Signed,
    Absolute,
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum)]
pub enum AggregationArg {
    Max,
    Mean,
    Single,
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum)]
pub enum ScopeArg {
    Numeric,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum)]
pub enum FeatureModeArg {
    All30,
    Selected,
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum)]
pub enum PartitionArg {
    Train,
    Validation,
    Test,
}

/// A failure with its exit code and a short machine-readable kind.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    fn new(code: i32, kind: &'static str, message: impl Into<String>) -> Self {
        Self {
            code,
            kind,
            message: message.into(),
        }
    }

    /// The single diagnostic line written to stderr.
    pub fn line(&self) -> String {
        let msg = self.message.replace(['\n', '\r'], " ");
        format!("studentnet: error[{}:{}]: {}", self.code, self.kind, msg)
    }
}

impl From<DatasetError> for CliError {
    fn from(e: DatasetError) -> Self {
        let (code, kind) = match &e {
            DatasetError::EmptyInput => (2, "empty_input"),
            DatasetError::BadHeader(_) => (2, "bad_header"),
            DatasetError::MalformedRow { .. } => (2, "malformed_row"),
            DatasetError::UnknownCategory { .. } => (2, "unknown_category"),
            DatasetError::GradeOutOfRange { .. } | DatasetError::GradeValue(_) => {
                (2, "grade_out_of_range")
            }
            DatasetError::Csv(_) => (2, "csv"),
            DatasetError::InvalidBins(_) => (3, "invalid_bins"),
            DatasetError::UnknownScheme(_) => (3, "unknown_scheme"),
            DatasetError::UnknownColumn(_) => (3, "unknown_column"),
            DatasetError::DuplicateColumn(_) => (3, "duplicate_column"),
            DatasetError::RatioOutOfRange(_) => (3, "ratio_out_of_range"),
            DatasetError::Leakage(_) => (3, "leakage"),
            DatasetError::Shape(_) => (5, "shape_mismatch"),
            DatasetError::DatasetTooSmall(_) => (6, "empty_partition"),
            DatasetError::Io(_) => (1, "io"),
        };
        Self::new(code, kind, e.to_string())
    }
}

impl From<StatsError> for CliError {
    fn from(e: StatsError) -> Self {
        let (code, kind) = match &e {
            StatsError::TooFewSamples { .. } | StatsError::TooFewRows(_) => (4, "too_few_samples"),
            StatsError::ConstantColumn | StatsError::ConstantInput => (4, "constant_column"),
            StatsError::NonFinite => (4, "non_finite"),
            StatsError::LengthMismatch(..) => (4, "length_mismatch"),
            StatsError::UnknownTarget(_) => (3, "unknown_target"),
            StatsError::KTooLarge { .. } => (3, "k_too_large"),
        };
        Self::new(code, kind, e.to_string())
    }
}

impl From<NetError> for CliError {
    fn from(e: NetError) -> Self {
        let (code, kind) = match &e {
            NetError::VersionMismatch { .. } => (5, "version_mismatch"),
            NetError::CorruptPayload(_) => (2, "corrupt_model"),
            NetError::Io(_) => (1, "io"),
            NetError::NonPositiveLearningRate(_) => (3, "invalid_config"),
            _ => (5, "shape_mismatch"),
        };
        Self::new(code, kind, e.to_string())
    }
}

impl From<TrainError> for CliError {
    fn from(e: TrainError) -> Self {
        let (code, kind) = match e {
            TrainError::EmptyTrainingSet | TrainError::EmptyTestSet => (6, "empty_partition"),
            TrainError::NoValidationSet => (6, "empty_partition"),
            TrainError::WidthMismatch { .. } => (5, "width_mismatch"),
            TrainError::InvalidConfig(_) => (3, "invalid_config"),
            TrainError::Diverged(_) => (4, "diverged"),
            TrainError::EmptyHistory | TrainError::MalformedHistory(_) => (2, "history"),
            TrainError::Io(_) => (1, "io"),
            TrainError::Net(inner) => return inner.into(),
        };
        Self::new(code, kind, e.to_string())
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Dataset(e) => e.into(),
            PipelineError::Stats(e) => e.into(),
            PipelineError::Net(e) => e.into(),
            PipelineError::Train(e) => e.into(),
            PipelineError::Config(m) => Self::new(3, "invalid_config", m),
            PipelineError::Io { path, source } => {
                if source.kind() == std::io::ErrorKind::NotFound {
                    Self::new(3, "missing_file", format!("{}: {source}", path.display()))
                } else {
                    Self::new(1, "io", format!("{}: {source}", path.display()))
                }
            }
            PipelineError::Json { path, source } => {
                Self::new(2, "json", format!("{}: {source}", path.display()))
            }
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// Parses `args` (program name first), runs the command, prints results to
/// stdout and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let first = e.to_string().lines().next().unwrap_or("").to_owned();
            let msg = first.trim_start_matches("error: ").to_owned();
            eprintln!("{}", CliError::new(3, "usage", msg).line());
            return 3;
        }
    };
    let mut stdout = std::io::stdout().lock();
    match execute(&cli, &mut stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = stdout.flush();
            eprintln!("{}", e.line());
            e.code
        }
    }
}

/// Resolves the configuration: defaults, then the config file, then flags.
pub fn resolve_config(cli: &Cli) -> CliResult<PipelineConfig> {
    let mut cfg = match &cli.config {
        Some(path) => PipelineConfig::from_json_file(path)?,
        None => PipelineConfig::default(),
    };
    if let Some(d) = &cli.data {
        cfg.data = Some(d.clone());
    }
    if let Some(o) = &cli.out {
        cfg.out = o.clone();
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Command::Train {
        epochs,
        batch_size,
        learning_rate,
        feature_mode,
        no_scaling,
    } = &cli.command
    {
        if let Some(e) = epochs {
            cfg.max_epochs = *e;
        }
        if let Some(b) = batch_size {
            cfg.batch_size = *b;
        }
        if let Some(lr) = learning_rate {
            cfg.learning_rate = *lr;
        }
        if let Some(m) = feature_mode {
            cfg.feature_mode = match m {
                FeatureModeArg::All30 => FeatureMode::All30,
                FeatureModeArg::Selected => FeatureMode::Selected,
            };
        }
        if *no_scaling {
            cfg.scaling = false;
        }
    }
    match &cli.command {
        Command::Stats {
            variant: Some(v), ..
        }
        | Command::Probplot {
            variant: Some(v), ..
        } => {
            cfg.estimator = match v {
                VariantArg::Biased => EstimatorVariant::Biased,
                VariantArg::BiasCorrected => EstimatorVariant::BiasCorrected,
            };
        }
        _ => {}
    }
    cfg.validate()?;
    Ok(cfg)
}

fn execute(cli: &Cli, stdout: &mut dyn Write) -> CliResult<()> {
    let cfg = resolve_config(cli)?;
    match &cli.command {
        Command::Stats { cols, .. } => cmd_stats(&cfg, cols, stdout),
        Command::Probplot { col, .. } => cmd_probplot(&cfg, col, stdout),
        Command::Corr => cmd_corr(&cfg, stdout),
        Command::Select {
            mode,
            aggregation,
            target,
            k,
            scope,
        } => cmd_select(&cfg, *mode, *aggregation, target, *k, *scope, stdout),
        Command::Train { .. } => cmd_train(&cfg, stdout),
        Command::Evaluate {
            model,
            preprocess,
            partition,
        } => cmd_evaluate(
            &cfg,
            model.as_deref(),
            preprocess.as_deref(),
            *partition,
            stdout,
        ),
        Command::Predict {
            model,
            preprocess,
            rows,
        } => cmd_predict(&cfg, model.as_deref(), preprocess.as_deref(), rows, stdout),
    }
}

fn out(w: &mut dyn Write, line: impl AsRef<str>) -> CliResult<()> {
    writeln!(w, "{}", line.as_ref()).map_err(|e| CliError::new(1, "io", e.to_string()))
}

fn encoded_dataset(cfg: &PipelineConfig) -> CliResult<DataMatrix> {
    let records = pipeline::load_records(cfg.data_path()?)?;
    let scheme = dataset::EncodingScheme::for_version(&cfg.scheme_version)?;
    Ok(dataset::encode(&records, &scheme)?)
}

/// Integer attributes plus the three grades.
pub fn numeric_columns() -> Vec<&'static str> {
    schema::integer_attribute_names()
        .chain(schema::GRADE_COLUMNS)
        .collect()
}

#[derive(Serialize)]
struct ColumnStats {
    column: String,
    #[serde(flatten)]
    summary: MomentSummary,
}

fn cmd_stats(cfg: &PipelineConfig, cols: &[String], w: &mut dyn Write) -> CliResult<()> {
    let encoded = encoded_dataset(cfg)?;
    let names: Vec<&str> = if cols.is_empty() {
        numeric_columns()
    } else {
        cols.iter().map(String::as_str).collect()
    };
    let summaries: Vec<ColumnStats> = pipeline::column_moments(&encoded, &names, cfg.estimator)?
        .into_iter()
        .map(|(column, summary)| ColumnStats { column, summary })
        .collect();
    pipeline::ensure_dir(&cfg.out)?;
    let path = cfg.out.join("stats.json");
    pipeline::write_json(&path, &summaries)?;
    for s in &summaries {
        out(w, serde_json::to_string(s).expect("summary serializes"))?;
    }
    Ok(())
}

/// File-name-safe column label.
fn file_label(col: &str) -> String {
    col.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn cmd_probplot(cfg: &PipelineConfig, col: &str, w: &mut dyn Write) -> CliResult<()> {
    let encoded = encoded_dataset(cfg)?;
    let values = encoded
        .column(col)
        .ok_or_else(|| DatasetError::UnknownColumn(col.to_owned()))?;
    let plot = stats::probplot_with(&values, cfg.estimator)?;
    pipeline::ensure_dir(&cfg.out)?;
    let stem = format!("probplot_{}", file_label(col));
    let csv = cfg.out.join(format!("{stem}.csv"));
    pipeline::write_with(&csv, |f| {
        plot.write_csv(f).map_err(|source| PipelineError::Io {
            path: csv.clone(),
            source,
        })
    })?;
    let sidecar = cfg.out.join(format!("{stem}.json"));
    pipeline::write_json(&sidecar, &plot.fit())?;
    out(
        w,
        serde_json::to_string(&plot.fit()).expect("fit serializes"),
    )?;
    Ok(())
}

fn cmd_corr(cfg: &PipelineConfig, w: &mut dyn Write) -> CliResult<()> {
    let encoded = encoded_dataset(cfg)?;
    let corr = stats::correlation_matrix(&encoded)?;
    pipeline::ensure_dir(&cfg.out)?;
    let path = cfg.out.join("correlation.csv");
    pipeline::write_with(&path, |f| {
        corr.write_csv(f).map_err(|source| PipelineError::Io {
            path: path.clone(),
            source,
        })
    })?;
    let constant: Vec<&str> = corr
        .labels
        .iter()
        .zip(&corr.constant)
        .filter(|(_, &c)| c)
        .map(|(l, _)| l.as_str())
        .collect();
    out(
        w,
        format!("wrote {} ({}x{})", path.display(), corr.dim(), corr.dim()),
    )?;
    if !constant.is_empty() {
        out(w, format!("constant columns: {}", constant.join(", ")))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct SelectionReport<'a> {
    scope: SelectionScope,
    #[serde(flatten)]
    ranking: &'a FeatureRanking,
    listing: Vec<&'a str>,
    reference: [&'static str; 7],
    reference_overlap: usize,
    full_ranking: &'a [stats::RankedFeature],
}

fn cmd_select(
    cfg: &PipelineConfig,
    mode: ModeArg,
    aggregation: AggregationArg,
    target: &str,
    k: usize,
    scope: ScopeArg,
    w: &mut dyn Write,
) -> CliResult<()> {
    let encoded = encoded_dataset(cfg)?;
    let scope = match scope {
        ScopeArg::Numeric => SelectionScope::Numeric,
        ScopeArg::All => SelectionScope::All,
    };
    let mode = match mode {
        ModeArg::Signed => RankingMode::SignedDesc,
        ModeArg::Absolute => RankingMode::AbsoluteDesc,
    };
    let aggregation = match aggregation {
        AggregationArg::Max => Aggregation::Max,
        AggregationArg::Mean => Aggregation::Mean,
        AggregationArg::Single => Aggregation::SingleTarget(target.to_owned()),
    };
    let ranking = pipeline::rank_features(&encoded, scope, mode, aggregation.clone(), k)?;
    let full = pipeline::rank_features(&encoded, scope, mode, aggregation, scope.columns().len())?;
    let report = SelectionReport {
        scope,
        ranking: &ranking,
        listing: ranking.listing(),
        reference: REFERENCE_FEATURES,
        reference_overlap: ranking.overlap(&REFERENCE_FEATURES),
        full_ranking: &full.ranked,
    };
    pipeline::ensure_dir(&cfg.out)?;
    pipeline::write_json(&cfg.out.join("selection.json"), &report)?;
    for (i, name) in report.listing.iter().enumerate() {
        out(w, format!("{i}\t{name}"))?;
    }
    out(
        w,
        format!(
            "reference_overlap\t{}/{}",
            report.reference_overlap,
            REFERENCE_FEATURES.len()
        ),
    )?;
    Ok(())
}

fn cmd_train(cfg: &PipelineConfig, w: &mut dyn Write) -> CliResult<()> {
    let records = pipeline::load_records(cfg.data_path()?)?;
    let outcome = pipeline::run(&records, cfg)?;
    pipeline::save_outcome(&outcome, &cfg.out)?;
    let h = &outcome.history;
    let (first, last) = (h.first().expect("non-empty"), h.last().expect("non-empty"));
    out(w, format!("epochs\t{}", h.epochs.len()))?;
    out(w, format!("first_train_loss\t{}", first.train_loss))?;
    out(w, format!("final_train_loss\t{}", last.train_loss))?;
    out(w, format!("test_accuracy\t{}", outcome.report.accuracy))?;
    out(
        w,
        format!("majority_baseline\t{}", outcome.report.majority_baseline),
    )?;
    Ok(())
}

fn load_model_pair(
    cfg: &PipelineConfig,
    model: Option<&Path>,
    preprocess: Option<&Path>,
) -> CliResult<(Network, Preprocess)> {
    let model = model.map_or_else(|| cfg.out.join(pipeline::MODEL_FILE), Path::to_path_buf);
    let pre = preprocess.map_or_else(
        || cfg.out.join(pipeline::PREPROCESS_FILE),
        Path::to_path_buf,
    );
    let file = fs::File::open(&model).map_err(|source| PipelineError::Io {
        path: model.clone(),
        source,
    })?;
    let net = nn::load_network(std::io::BufReader::new(file))?;
    let pre: Preprocess = pipeline::read_json(&pre)?;
    if net.input_width() != pre.feature_columns.len() {
        return Err(TrainError::WidthMismatch {
            data: pre.feature_columns.len(),
            network: net.input_width(),
        }
        .into());
    }
    Ok((net, pre))
}

fn cmd_evaluate(
    cfg: &PipelineConfig,
    model: Option<&Path>,
    preprocess: Option<&Path>,
    partition: PartitionArg,
    w: &mut dyn Write,
) -> CliResult<()> {
    let (net, pre) = load_model_pair(cfg, model, preprocess)?;
    let records = pipeline::load_records(cfg.data_path()?)?;
    let encoded = dataset::encode(&records, &pre.scheme()?)?;
    let split = pre.apply(&encoded)?;
    let part = match partition {
        PartitionArg::Train => &split.train,
        PartitionArg::Validation => &split.validation,
        PartitionArg::Test => &split.test,
    };
    let report = train::evaluate(&net, part)?;
    pipeline::ensure_dir(&cfg.out)?;
    pipeline::write_json(&cfg.out.join(pipeline::EVALUATION_FILE), &report)?;
    out(w, format!("n\t{}", report.n))?;
    out(w, format!("accuracy\t{}", report.accuracy))?;
    out(
        w,
        format!("majority_baseline\t{}", report.majority_baseline),
    )?;
    Ok(())
}

fn cmd_predict(
    cfg: &PipelineConfig,
    model: Option<&Path>,
    preprocess: Option<&Path>,
    rows: &Path,
    w: &mut dyn Write,
) -> CliResult<()> {
    let (net, pre) = load_model_pair(cfg, model, preprocess)?;
    let file = fs::File::open(rows).map_err(|source| PipelineError::Io {
        path: rows.to_owned(),
        source,
    })?;
    let attrs = dataset::parse_attribute_rows(std::io::BufReader::new(file))?;
    let encoded = dataset::encode_attributes(&attrs, &pre.scheme()?)?;
    let features = pre.transform_features(&encoded)?;
    let classes = (0..features.rows())
        .map(|r| net.predict_class(features.row(r)))
        .collect::<Result<Vec<_>, _>>()?;
    pipeline::ensure_dir(&cfg.out)?;
    let path = cfg.out.join("predictions.csv");
    pipeline::write_with(&path, |f| {
        let io = |source| PipelineError::Io {
            path: path.clone(),
            source,
        };
        writeln!(f, "row,class,label").map_err(io)?;
        for (i, &c) in classes.iter().enumerate() {
            writeln!(f, "{i},{c},{}", CLASS_NAMES[c]).map_err(io)?;
        }
        Ok(())
    })?;
    for &c in &classes {
        out(w, CLASS_NAMES[c])?;
    }
    Ok(())
}
