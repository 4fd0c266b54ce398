//! Per-grade smoothed multinomial models over string features.
//!
//! Both the word model and the parse-subtree model are instances of
//! [`GradeModel`]; they differ only in what a feature is. For a feature `f`
//! seen in training and a grade `g`:
//!
//! ```text
//! p(f | g) = (1 - oov_mass) * (lambda * c(f, g) / T(g) + (1 - lambda) * c(f) / T)
//! ```
//!
//! where `c(f)`/`T` are the pooled counts over all grades. Unseen features
//! share `oov_mass` uniformly over a fixed number of hypothetical unseen
//! types, so every grade scores them identically.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{read_utf8, Error, Result};

pub const MODEL_FORMAT_VERSION: u32 = 1;

pub const DEFAULT_LAMBDA: f64 = 0.9;
pub const DEFAULT_OOV_MASS: f64 = 1e-4;
/// Unseen-type count defaults to this multiple of the vocabulary size.
pub const DEFAULT_UNSEEN_FACTOR: f64 = 10.0;

/// Relative gap below which two log-likelihoods count as tied.
const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct GradeLevel(u8);

impl GradeLevel {
    pub const MIN: u8 = 1;
    pub const MAX: u8 = 12;

    pub fn new(value: i64) -> Result<Self> {
        if (i64::from(Self::MIN)..=i64::from(Self::MAX)).contains(&value) {
            Ok(GradeLevel(value as u8))
        } else {
            Err(Error::InvalidGrade(value))
        }
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = GradeLevel> {
        (Self::MIN..=Self::MAX).map(GradeLevel)
    }
}

impl TryFrom<u8> for GradeLevel {
    type Error = Error;

    fn try_from(value: u8) -> Result<Self> {
        GradeLevel::new(i64::from(value))
    }
}

impl From<GradeLevel> for u8 {
    fn from(g: GradeLevel) -> u8 {
        g.0
    }
}

impl fmt::Display for GradeLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureKind {
    Word,
    Subtree,
}

impl fmt::Display for FeatureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FeatureKind::Word => "word",
            FeatureKind::Subtree => "subtree",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PriorMode {
    #[default]
    Uniform,
    /// Proportional to the number of training documents per grade.
    Proportional,
}

/// Smoothing knobs as requested by the caller. `unseen_types` of `None`
/// resolves to `DEFAULT_UNSEEN_FACTOR * |vocabulary|` at training time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothingConfig {
    pub lambda: f64,
    pub oov_mass: f64,
    pub unseen_types: Option<f64>,
    pub priors: PriorMode,
    pub binary_features: bool,
}

impl Default for SmoothingConfig {
    fn default() -> Self {
        SmoothingConfig {
            lambda: DEFAULT_LAMBDA,
            oov_mass: DEFAULT_OOV_MASS,
            unseen_types: None,
            priors: PriorMode::Uniform,
            binary_features: false,
        }
    }
}

impl SmoothingConfig {
    fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda <= 1.0) {
            return Err(Error::InvalidSmoothing(format!(
                "lambda {} not in (0, 1]",
                self.lambda
            )));
        }
        if !(self.oov_mass > 0.0 && self.oov_mass < 1.0) {
            return Err(Error::InvalidSmoothing(format!(
                "oov mass {} not in (0, 1)",
                self.oov_mass
            )));
        }
        if let Some(u) = self.unseen_types {
            if !(u.is_finite() && u > 0.0) {
                return Err(Error::InvalidSmoothing(format!(
                    "unseen type count {u} must be positive"
                )));
            }
        }
        Ok(())
    }
}

/// Smoothing parameters as stored in a trained model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Smoothing {
    pub lambda: f64,
    pub oov_mass: f64,
    pub unseen_types: f64,
}

/// Feature counts for one document, with multiplicity.
pub type FeatureCounts = BTreeMap<String, u64>;

pub fn count_features<I, S>(features: I) -> FeatureCounts
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let mut counts = FeatureCounts::new();
    for f in features {
        *counts.entry(f.into()).or_insert(0) += 1;
    }
    counts
}

fn presence(counts: &FeatureCounts) -> FeatureCounts {
    counts.keys().map(|k| (k.clone(), 1)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradeModel {
    feature_kind: FeatureKind,
    smoothing: Smoothing,
    binary_features: bool,
    priors: BTreeMap<GradeLevel, f64>,
    documents: BTreeMap<GradeLevel, u64>,
    counts: BTreeMap<GradeLevel, FeatureCounts>,
    totals: BTreeMap<GradeLevel, u64>,
    pooled: FeatureCounts,
    pooled_total: u64,
}

impl GradeModel {
    /// Tabulates per-grade feature counts. Each entry is one document.
    pub fn train(
        feature_kind: FeatureKind,
        entries: &[(GradeLevel, FeatureCounts)],
        config: &SmoothingConfig,
    ) -> Result<Self> {
        config.validate()?;
        if entries.is_empty() {
            return Err(Error::DegenerateCorpus("corpus is empty".into()));
        }
        let mut documents: BTreeMap<GradeLevel, u64> = BTreeMap::new();
        let mut counts: BTreeMap<GradeLevel, FeatureCounts> = BTreeMap::new();
        for (index, (grade, doc)) in entries.iter().enumerate() {
            if doc.values().all(|&c| c == 0) {
                return Err(Error::InvalidEntry(format!(
                    "document {} (grade {grade}) has no {feature_kind} features",
                    index + 1
                )));
            }
            *documents.entry(*grade).or_insert(0) += 1;
            let doc = if config.binary_features {
                presence(doc)
            } else {
                doc.clone()
            };
            let grade_counts = counts.entry(*grade).or_default();
            for (f, c) in doc {
                if c > 0 {
                    *grade_counts.entry(f).or_insert(0) += c;
                }
            }
        }
        if counts.len() < 2 {
            return Err(Error::DegenerateCorpus(format!(
                "need at least 2 grades, found {}",
                counts.len()
            )));
        }

        let n_docs: u64 = documents.values().sum();
        let priors = match config.priors {
            PriorMode::Uniform => {
                let p = 1.0 / counts.len() as f64;
                counts.keys().map(|&g| (g, p)).collect()
            }
            PriorMode::Proportional => documents
                .iter()
                .map(|(&g, &d)| (g, d as f64 / n_docs as f64))
                .collect(),
        };

        let mut model = GradeModel {
            feature_kind,
            smoothing: Smoothing {
                lambda: config.lambda,
                oov_mass: config.oov_mass,
                unseen_types: 0.0,
            },
            binary_features: config.binary_features,
            priors,
            documents,
            totals: BTreeMap::new(),
            counts,
            pooled: FeatureCounts::new(),
            pooled_total: 0,
        };
        model.derive_totals();
        model.smoothing.unseen_types = config
            .unseen_types
            .unwrap_or(DEFAULT_UNSEEN_FACTOR * model.pooled.len() as f64);
        Ok(model)
    }

    fn derive_totals(&mut self) {
        self.totals = self
            .counts
            .iter()
            .map(|(&g, c)| (g, c.values().sum()))
            .collect();
        self.pooled.clear();
        for c in self.counts.values() {
            for (f, n) in c {
                *self.pooled.entry(f.clone()).or_insert(0) += n;
            }
        }
        self.pooled_total = self.totals.values().sum();
    }

    pub fn feature_kind(&self) -> FeatureKind {
        self.feature_kind
    }

    pub fn smoothing(&self) -> Smoothing {
        self.smoothing
    }

    pub fn binary_features(&self) -> bool {
        self.binary_features
    }

    pub fn grades(&self) -> Vec<GradeLevel> {
        self.counts.keys().copied().collect()
    }

    pub fn vocabulary(&self) -> impl Iterator<Item = &str> {
        self.pooled.keys().map(String::as_str)
    }

    pub fn vocabulary_size(&self) -> usize {
        self.pooled.len()
    }

    pub fn count(&self, feature: &str, grade: GradeLevel) -> u64 {
        self.counts
            .get(&grade)
            .and_then(|c| c.get(feature))
            .copied()
            .unwrap_or(0)
    }

    pub fn total(&self, grade: GradeLevel) -> u64 {
        self.totals.get(&grade).copied().unwrap_or(0)
    }

    pub fn prior(&self, grade: GradeLevel) -> f64 {
        self.priors.get(&grade).copied().unwrap_or(0.0)
    }

    pub fn priors(&self) -> &BTreeMap<GradeLevel, f64> {
        &self.priors
    }

    /// Probability assigned to any single unseen feature, in every grade.
    pub fn unseen_prob(&self) -> f64 {
        self.smoothing.oov_mass / self.smoothing.unseen_types
    }

    pub fn smoothed_prob(&self, feature: &str, grade: GradeLevel) -> f64 {
        let Some(&pooled) = self.pooled.get(feature) else {
            return self.unseen_prob();
        };
        let Smoothing {
            lambda, oov_mass, ..
        } = self.smoothing;
        let in_grade = self.count(feature, grade) as f64 / self.total(grade) as f64;
        let background = pooled as f64 / self.pooled_total as f64;
        (1.0 - oov_mass) * (lambda * in_grade + (1.0 - lambda) * background)
    }

    /// In-vocabulary smoothed mass plus reserved OOV mass; 1 up to rounding.
    pub fn normalization_mass(&self, grade: GradeLevel) -> f64 {
        self.pooled
            .keys()
            .map(|f| self.smoothed_prob(f, grade))
            .sum::<f64>()
            + self.smoothing.oov_mass
    }

    fn scoring_counts<'a>(&self, doc: &'a FeatureCounts) -> std::borrow::Cow<'a, FeatureCounts> {
        if self.binary_features {
            std::borrow::Cow::Owned(presence(doc))
        } else {
            std::borrow::Cow::Borrowed(doc)
        }
    }

    /// Sum of feature log-probabilities per grade, without the prior.
    /// Terms are accumulated in feature order as `count * ln p`, so the
    /// result does not depend on token order and doubles exactly when every
    /// count doubles.
    pub fn evidence(&self, doc: &FeatureCounts) -> Result<BTreeMap<GradeLevel, f64>> {
        let doc = self.scoring_counts(doc);
        if doc.values().all(|&c| c == 0) {
            return Err(Error::EmptyDocument);
        }
        Ok(self
            .counts
            .keys()
            .map(|&g| {
                let sum = doc
                    .iter()
                    .filter(|(_, &c)| c > 0)
                    .map(|(f, &c)| c as f64 * self.smoothed_prob(f, g).ln())
                    .sum::<f64>();
                (g, sum)
            })
            .collect())
    }

    pub fn log_likelihoods(&self, doc: &FeatureCounts) -> Result<BTreeMap<GradeLevel, f64>> {
        Ok(self
            .evidence(doc)?
            .into_iter()
            .map(|(g, e)| (g, self.prior(g).ln() + e))
            .collect())
    }

    fn uniform_priors(&self) -> bool {
        let mut it = self.priors.values();
        let first = it.next().copied();
        it.all(|&p| Some(p) == first)
    }

    /// Scores used for the MAP decision. With uniform priors the prior term
    /// is a shared constant and is left out so that it cannot perturb
    /// near-ties through rounding.
    fn decision_scores(&self, doc: &FeatureCounts) -> Result<BTreeMap<GradeLevel, f64>> {
        if self.uniform_priors() {
            self.evidence(doc)
        } else {
            self.log_likelihoods(doc)
        }
    }

    /// Every grade whose score ties the maximum, ascending.
    pub fn map_ties(&self, doc: &FeatureCounts) -> Result<Vec<GradeLevel>> {
        let scores = self.decision_scores(doc)?;
        let best = scores.values().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(scores
            .into_iter()
            .filter(|&(_, s)| is_tie(s, best))
            .map(|(g, _)| g)
            .collect())
    }

    /// Maximum a-posteriori grade; ties go to the lowest grade.
    pub fn classify_map(&self, doc: &FeatureCounts) -> Result<GradeLevel> {
        Ok(self.map_ties(doc)?[0])
    }

    pub fn posterior(&self, doc: &FeatureCounts) -> Result<BTreeMap<GradeLevel, f64>> {
        let ll = self.log_likelihoods(doc)?;
        Ok(normalize_log_scores(&ll, &self.priors))
    }

    /// Posterior-weighted mean grade.
    pub fn expected_grade(&self, doc: &FeatureCounts) -> Result<f64> {
        let post = self.posterior(doc)?;
        let mean: f64 = post.iter().map(|(g, p)| f64::from(g.value()) * p).sum();
        let lo = f64::from(self.counts.keys().next().map_or(1, |g| g.value()));
        let hi = f64::from(self.counts.keys().next_back().map_or(12, |g| g.value()));
        Ok(mean.clamp(lo, hi))
    }

    pub fn to_json(&self) -> Result<String> {
        let file = ModelFile {
            format_version: MODEL_FORMAT_VERSION,
            feature_kind: self.feature_kind,
            tie_break: TieBreak::LowestGrade,
            binary_features: self.binary_features,
            smoothing: self.smoothing,
            grades: self.grades(),
            priors: self.priors.clone(),
            documents: self.documents.clone(),
            totals: self.totals.clone(),
            counts: self.counts.clone(),
        };
        let mut s = serde_json::to_string_pretty(&file)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(json: &str, expected: FeatureKind) -> Result<Self> {
        let probe: VersionProbe = serde_json::from_str(json)?;
        if probe.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::ModelFormat(format!(
                "format version {} is not supported (expected {MODEL_FORMAT_VERSION})",
                probe.format_version
            )));
        }
        let file: ModelFile = serde_json::from_str(json)?;
        if file.feature_kind != expected {
            return Err(Error::ModelFormat(format!(
                "model holds {} features, expected {expected}",
                file.feature_kind
            )));
        }
        let mut model = GradeModel {
            feature_kind: file.feature_kind,
            smoothing: file.smoothing,
            binary_features: file.binary_features,
            priors: file.priors,
            documents: file.documents,
            counts: file.counts,
            totals: BTreeMap::new(),
            pooled: FeatureCounts::new(),
            pooled_total: 0,
        };
        model.derive_totals();
        model.check_loaded(&file.grades, &file.totals)?;
        Ok(model)
    }

    fn check_loaded(
        &self,
        grades: &[GradeLevel],
        totals: &BTreeMap<GradeLevel, u64>,
    ) -> Result<()> {
        let bad = |m: String| Err(Error::ModelFormat(m));
        if grades != self.grades().as_slice() || self.counts.len() < 2 {
            return bad("grade list does not match the count tables".into());
        }
        if totals != &self.totals {
            return bad("stored totals disagree with counts".into());
        }
        if self.totals.values().any(|&t| t == 0) {
            return bad("a grade has no observations".into());
        }
        if self.priors.keys().copied().collect::<Vec<_>>() != grades {
            return bad("priors do not cover exactly the model grades".into());
        }
        let prior_sum: f64 = self.priors.values().sum();
        if (prior_sum - 1.0).abs() > 1e-9 || self.priors.values().any(|&p| p.is_nan() || p <= 0.0) {
            return bad(format!("priors sum to {prior_sum}, expected 1"));
        }
        SmoothingConfig {
            lambda: self.smoothing.lambda,
            oov_mass: self.smoothing.oov_mass,
            unseen_types: Some(self.smoothing.unseen_types),
            ..SmoothingConfig::default()
        }
        .validate()
        .map_err(|e| Error::ModelFormat(e.to_string()))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path, expected: FeatureKind) -> Result<Self> {
        GradeModel::from_json(&read_utf8(path)?, expected)
    }
}

fn is_tie(score: f64, best: f64) -> bool {
    if score == best {
        return true;
    }
    if !score.is_finite() || !best.is_finite() {
        return false;
    }
    (best - score).abs() <= TIE_TOLERANCE * best.abs().max(score.abs()).max(1.0)
}

/// Exponentiates and normalizes log scores after subtracting the maximum.
/// When every score is `-inf` the fallback distribution is returned.
pub fn normalize_log_scores(
    scores: &BTreeMap<GradeLevel, f64>,
    fallback: &BTreeMap<GradeLevel, f64>,
) -> BTreeMap<GradeLevel, f64> {
    let max = scores.values().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return fallback.clone();
    }
    let weights: BTreeMap<GradeLevel, f64> =
        scores.iter().map(|(&g, &s)| (g, (s - max).exp())).collect();
    let z: f64 = weights.values().sum();
    weights.into_iter().map(|(g, w)| (g, w / z)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum TieBreak {
    LowestGrade,
}

#[derive(Deserialize)]
struct VersionProbe {
    format_version: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    format_version: u32,
    feature_kind: FeatureKind,
    tie_break: TieBreak,
    binary_features: bool,
    smoothing: Smoothing,
    grades: Vec<GradeLevel>,
    priors: BTreeMap<GradeLevel, f64>,
    documents: BTreeMap<GradeLevel, u64>,
    totals: BTreeMap<GradeLevel, u64>,
    counts: BTreeMap<GradeLevel, FeatureCounts>,
}

/// Distinct grades in a corpus, ascending.
pub fn distinct_grades<'a, I>(grades: I) -> BTreeSet<GradeLevel>
where
    I: IntoIterator<Item = &'a GradeLevel>,
{
    grades.into_iter().copied().collect()
}
