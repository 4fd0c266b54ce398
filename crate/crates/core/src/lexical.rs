//! Word-level grade estimation: one smoothed unigram model per grade.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{read_utf8, Error, Result};
use crate::model::{
    count_features, distinct_grades, FeatureCounts, FeatureKind, GradeLevel, GradeModel,
    SmoothingConfig,
};
use crate::text::{RawDocument, TokenizedDocument, Tokenizer};

/// Grade-labelled training documents.
#[derive(Debug, Clone, Default)]
pub struct LabeledCorpus {
    entries: Vec<(TokenizedDocument, GradeLevel)>,
}

impl LabeledCorpus {
    pub fn new(entries: Vec<(TokenizedDocument, GradeLevel)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::DegenerateCorpus("corpus is empty".into()));
        }
        if let Some(i) = entries.iter().position(|(d, _)| d.token_count() == 0) {
            return Err(Error::InvalidEntry(format!("document {} is empty", i + 1)));
        }
        let grades = distinct_grades(entries.iter().map(|(_, g)| g));
        if grades.len() < 2 {
            return Err(Error::DegenerateCorpus(format!(
                "need at least 2 grades, found {}",
                grades.len()
            )));
        }
        Ok(LabeledCorpus { entries })
    }

    pub fn entries(&self) -> &[(TokenizedDocument, GradeLevel)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Reads either a JSON-lines file of `{"grade": n, "text": "..."}` objects
    /// or a directory with `grade-01` .. `grade-12` subdirectories of text
    /// files.
    pub fn load(path: &Path, tokenizer: &Tokenizer) -> Result<Self> {
        let raw = if path.is_dir() {
            read_grade_dirs(path)?
                .into_iter()
                .map(|(grade, file)| {
                    let bytes = std::fs::read(&file).map_err(|e| Error::io(&file, e))?;
                    let doc = RawDocument::from_bytes(file.display().to_string(), &bytes)?;
                    Ok((doc, grade, file, 0))
                })
                .collect::<Result<Vec<_>>>()?
        } else {
            read_jsonl(path)?
        };
        let mut entries = Vec::with_capacity(raw.len());
        for (doc, grade, file, line) in raw {
            let tokens = tokenizer.tokenize(&doc);
            if tokens.token_count() == 0 {
                return Err(Error::Located {
                    path: file,
                    line,
                    message: "document has no word tokens".into(),
                });
            }
            entries.push((tokens, grade));
        }
        LabeledCorpus::new(entries)
    }
}

#[derive(Deserialize)]
struct JsonlText {
    grade: i64,
    text: String,
}

fn read_jsonl(path: &Path) -> Result<Vec<(RawDocument, GradeLevel, PathBuf, usize)>> {
    let contents = read_utf8(path)?;
    let mut out = Vec::new();
    for (i, line) in contents.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let located = |message: String| Error::Located {
            path: path.to_owned(),
            line: i + 1,
            message,
        };
        let rec: JsonlText = serde_json::from_str(line).map_err(|e| located(e.to_string()))?;
        let grade = GradeLevel::new(rec.grade).map_err(|e| located(e.to_string()))?;
        out.push((
            RawDocument::new(format!("{}:{}", path.display(), i + 1), rec.text),
            grade,
            path.to_owned(),
            i + 1,
        ));
    }
    Ok(out)
}

/// Lists `(grade, file)` pairs under `grade-NN` subdirectories, sorted by
/// grade then file name. Other entries are ignored.
pub(crate) fn read_grade_dirs(root: &Path) -> Result<Vec<(GradeLevel, PathBuf)>> {
    let mut out = Vec::new();
    let mut dirs: Vec<PathBuf> = std::fs::read_dir(root)
        .map_err(|e| Error::io(root, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_dir())
        .collect();
    dirs.sort();
    for dir in dirs {
        let Some(name) = dir.file_name().and_then(|n| n.to_str()) else {
            continue;
        };
        let Some(num) = name.strip_prefix("grade-") else {
            continue;
        };
        let grade = num
            .parse::<i64>()
            .map_err(|_| Error::Format(format!("bad grade directory name {name:?}")))
            .and_then(GradeLevel::new)?;
        let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)
            .map_err(|e| Error::io(&dir, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file())
            .collect();
        files.sort();
        out.extend(files.into_iter().map(|f| (grade, f)));
    }
    Ok(out)
}

pub fn word_counts(doc: &TokenizedDocument) -> FeatureCounts {
    count_features(doc.tokens())
}

#[derive(Debug, Clone, PartialEq)]
pub struct LexicalModel {
    inner: GradeModel,
}

pub fn train_lexical(corpus: &LabeledCorpus, config: &SmoothingConfig) -> Result<LexicalModel> {
    let entries: Vec<(GradeLevel, FeatureCounts)> = corpus
        .entries()
        .iter()
        .map(|(doc, g)| (*g, word_counts(doc)))
        .collect();
    Ok(LexicalModel {
        inner: GradeModel::train(FeatureKind::Word, &entries, config)?,
    })
}

impl LexicalModel {
    pub fn model(&self) -> &GradeModel {
        &self.inner
    }

    pub fn smoothed_prob(&self, word: &str, grade: GradeLevel) -> f64 {
        self.inner.smoothed_prob(word, grade)
    }

    pub fn log_likelihoods(&self, doc: &TokenizedDocument) -> Result<BTreeMap<GradeLevel, f64>> {
        self.inner.log_likelihoods(&word_counts(doc))
    }

    pub fn classify_map(&self, doc: &TokenizedDocument) -> Result<GradeLevel> {
        self.inner.classify_map(&word_counts(doc))
    }

    pub fn expected_grade(&self, doc: &TokenizedDocument) -> Result<f64> {
        self.inner.expected_grade(&word_counts(doc))
    }

    pub fn to_json(&self) -> Result<String> {
        self.inner.to_json()
    }

    pub fn from_json(json: &str) -> Result<Self> {
        Ok(LexicalModel {
            inner: GradeModel::from_json(json, FeatureKind::Word)?,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        self.inner.save(path)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(LexicalModel {
            inner: GradeModel::load(path, FeatureKind::Word)?,
        })
    }
}
