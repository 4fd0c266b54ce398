//! Flesch-Kincaid grade level and the Dale-Chall score.
//!
//! Constants are the published ones:
//!
//! * Flesch-Kincaid (Kincaid et al. 1975):
//!   `0.39 * words/sentences + 11.8 * syllables/words - 15.59`
//! * Dale-Chall (1948): `0.1579 * pct_difficult + 0.0496 * words/sentences`,
//!   plus `3.6365` when more than 5% of the words are difficult.
//!
//! Outputs are not clamped; banding to the 1..=12 grade scale is left to
//! whoever displays them.

use std::collections::BTreeSet;
use std::path::Path;

use serde::Serialize;

use crate::error::{read_utf8, Error, Result};
use crate::text::{document_counts, DocumentCounts, TokenizedDocument};

pub const FK_SENTENCE_WEIGHT: f64 = 0.39;
pub const FK_SYLLABLE_WEIGHT: f64 = 11.8;
pub const FK_INTERCEPT: f64 = 15.59;

pub const DC_DIFFICULT_WEIGHT: f64 = 0.1579;
pub const DC_SENTENCE_WEIGHT: f64 = 0.0496;
pub const DC_ADJUSTMENT: f64 = 3.6365;
/// Percent of difficult words above which the adjustment applies (strictly).
pub const DC_ADJUSTMENT_THRESHOLD: f64 = 5.0;

/// The bundled easy-word list.
pub const BUNDLED_EASY_WORDS: &str = include_str!("../data/easy_words.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Formula {
    FleschKincaid,
    DaleChall,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FormulaInputs {
    pub words: usize,
    pub sentences: usize,
    pub syllables: usize,
    pub pct_difficult: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FormulaScore {
    pub value: f64,
    pub formula: Formula,
    pub inputs: FormulaInputs,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EasyWordList {
    name: String,
    words: BTreeSet<String>,
}

impl EasyWordList {
    pub fn new<I, S>(name: impl Into<String>, words: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let words: BTreeSet<String> = words
            .into_iter()
            .map(|w| w.as_ref().trim().to_lowercase())
            .filter(|w| !w.is_empty())
            .collect();
        if words.is_empty() {
            return Err(Error::Format("easy-word list is empty".into()));
        }
        Ok(EasyWordList {
            name: name.into(),
            words,
        })
    }

    /// One word per line; blank lines and `#` comment lines are ignored.
    pub fn parse(name: impl Into<String>, contents: &str) -> Result<Self> {
        EasyWordList::new(
            name,
            contents
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#')),
        )
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        EasyWordList::parse(path.display().to_string(), &read_utf8(path)?)
    }

    pub fn bundled() -> Self {
        EasyWordList::parse("bundled", BUNDLED_EASY_WORDS).expect("bundled list is non-empty")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }
}

pub fn flesch_kincaid(words: usize, sentences: usize, syllables: usize) -> Result<FormulaScore> {
    if words == 0 || sentences == 0 {
        return Err(Error::EmptyDocument);
    }
    if syllables < words {
        return Err(Error::InconsistentCounts(format!(
            "{syllables} syllables for {words} words"
        )));
    }
    let w = words as f64;
    let value = FK_SENTENCE_WEIGHT * (w / sentences as f64)
        + FK_SYLLABLE_WEIGHT * (syllables as f64 / w)
        - FK_INTERCEPT;
    Ok(FormulaScore {
        value,
        formula: Formula::FleschKincaid,
        inputs: FormulaInputs {
            words,
            sentences,
            syllables,
            pct_difficult: 0.0,
        },
    })
}

pub fn dale_chall(words: usize, sentences: usize, difficult_words: usize) -> Result<FormulaScore> {
    if words == 0 || sentences == 0 {
        return Err(Error::EmptyDocument);
    }
    if difficult_words > words {
        return Err(Error::InconsistentCounts(format!(
            "{difficult_words} difficult words out of {words}"
        )));
    }
    let pct = 100.0 * difficult_words as f64 / words as f64;
    let mut value =
        DC_DIFFICULT_WEIGHT * pct + DC_SENTENCE_WEIGHT * (words as f64 / sentences as f64);
    if pct > DC_ADJUSTMENT_THRESHOLD {
        value += DC_ADJUSTMENT;
    }
    Ok(FormulaScore {
        value,
        formula: Formula::DaleChall,
        inputs: FormulaInputs {
            words,
            sentences,
            syllables: 0,
            pct_difficult: pct,
        },
    })
}

/// Tokens (with multiplicity) that are not on the easy list.
pub fn count_difficult(doc: &TokenizedDocument, list: &EasyWordList) -> usize {
    doc.tokens().filter(|t| !list.contains(t)).count()
}

/// Both formulas over one tokenized document, sharing the same counts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FormulaReport {
    pub words: usize,
    pub sentences: usize,
    pub syllables: usize,
    pub difficult_words: usize,
    pub flesch_kincaid: f64,
    pub dale_chall: f64,
}

pub fn score_document(doc: &TokenizedDocument, list: &EasyWordList) -> Result<FormulaReport> {
    let DocumentCounts {
        words,
        sentences,
        syllables,
    } = document_counts(doc);
    let difficult_words = count_difficult(doc, list);
    let fk = flesch_kincaid(words, sentences, syllables)?;
    let dc = dale_chall(words, sentences, difficult_words)?;
    Ok(FormulaReport {
        words,
        sentences,
        syllables,
        difficult_words,
        flesch_kincaid: fk.value,
        dale_chall: dc.value,
    })
}
