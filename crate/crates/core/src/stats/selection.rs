use serde::{Deserialize, Serialize};

use super::{CorrelationMatrix, Result, StatsError};

/// Non-grade features of the published "most correlated features" table,
/// spelled as in the dataset schema. Used only as a comparison target.
pub const REFERENCE_FEATURES: [&str; 7] = [
    "Medu",
    "Fedu",
    "studytime",
    "famrel",
    "freetime",
    "absences",
    "age",
];

/// Ordering applied to feature scores.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankingMode {
    /// Highest signed correlation first.
    SignedDesc,
    /// Highest absolute correlation first.
    AbsoluteDesc,
}

/// How a feature's correlations with several targets become one score.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregation {
    Max,
    Mean,
    SingleTarget(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankedFeature {
    pub name: String,
    pub score: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureRanking {
    /// Target columns, listed ahead of the ranked features.
    pub targets: Vec<String>,
    pub mode: RankingMode,
    pub aggregation: Aggregation,
    pub k: usize,
    /// The top `k` non-target columns, best first.
    pub ranked: Vec<RankedFeature>,
}

impl FeatureRanking {
    /// Targets followed by the ranked feature names.
    pub fn listing(&self) -> Vec<&str> {
        self.targets
            .iter()
            .map(String::as_str)
            .chain(self.ranked.iter().map(|f| f.name.as_str()))
            .collect()
    }

    pub fn feature_names(&self) -> Vec<&str> {
        self.ranked.iter().map(|f| f.name.as_str()).collect()
    }

    /// How many of `reference` appear among the ranked features.
    pub fn overlap(&self, reference: &[&str]) -> usize {
        reference
            .iter()
            .filter(|r| self.ranked.iter().any(|f| f.name == **r))
            .count()
    }
}

/// Scores every non-target column by its correlation with the targets and
/// keeps the best `k`. Ties are broken by column name, ascending.
pub fn select_features(
    corr: &CorrelationMatrix,
    targets: &[&str],
    mode: RankingMode,
    aggregation: Aggregation,
    k: usize,
) -> Result<FeatureRanking> {
    let target_idx = targets
        .iter()
        .map(|t| {
            corr.index_of(t)
                .ok_or_else(|| StatsError::UnknownTarget((*t).to_owned()))
        })
        .collect::<Result<Vec<_>>>()?;
    let scoring_idx = match &aggregation {
        Aggregation::SingleTarget(t) => vec![corr
            .index_of(t)
            .ok_or_else(|| StatsError::UnknownTarget(t.clone()))?],
        Aggregation::Max | Aggregation::Mean => target_idx.clone(),
    };
    if scoring_idx.is_empty() {
        return Err(StatsError::UnknownTarget(String::new()));
    }

    let candidates: Vec<usize> = (0..corr.dim())
        .filter(|i| !target_idx.contains(i) && !scoring_idx.contains(i))
        .collect();
    if k > candidates.len() {
        return Err(StatsError::KTooLarge {
            k,
            available: candidates.len(),
        });
    }

    let mut scored: Vec<RankedFeature> = candidates
        .into_iter()
        .map(|i| {
            let rs = scoring_idx.iter().map(|&t| {
                let r = corr.get(i, t);
                match mode {
                    RankingMode::SignedDesc => r,
                    RankingMode::AbsoluteDesc => r.abs(),
                }
            });
            let score = match aggregation {
                Aggregation::Max => rs.fold(f64::NEG_INFINITY, f64::max),
                Aggregation::Mean => rs.sum::<f64>() / scoring_idx.len() as f64,
                Aggregation::SingleTarget(_) => rs.sum(),
            };
            RankedFeature {
                name: corr.labels[i].clone(),
                score,
            }
        })
        .collect();
    scored.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.name.cmp(&b.name))
    });
    scored.truncate(k);

    Ok(FeatureRanking {
        targets: targets.iter().map(|t| (*t).to_owned()).collect(),
        mode,
        aggregation,
        k,
        ranked: scored,
    })
}
