//! Segmentation and counting primitives shared by every scorer.
//!
//! Sentences end at `.`, `!` or `?` (runs allowed, optionally followed by
//! closing quotes or brackets) when the run is followed by whitespace or the
//! end of the text. A single `.` directly after a word on the abbreviation
//! list does not end a sentence.
//!
//! Tokens are maximal runs of letters and digits; an apostrophe or hyphen is
//! kept when it sits between two alphanumeric characters. Tokens are
//! lowercased.

use std::collections::BTreeSet;
use std::path::Path;

use crate::error::{read_utf8, Error, Result};

pub const DEFAULT_ABBREVIATIONS: &[&str] = &["mr", "mrs", "ms", "dr", "sen", "gov", "st", "u.s"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawDocument {
    pub id: String,
    pub text: String,
}

impl RawDocument {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        RawDocument {
            id: id.into(),
            text: text.into(),
        }
    }

    /// Builds a document from raw bytes, rejecting anything that is not UTF-8.
    pub fn from_bytes(id: impl Into<String>, bytes: &[u8]) -> Result<Self> {
        let text = std::str::from_utf8(bytes)?;
        Ok(RawDocument::new(id, text))
    }
}

/// Sentences of lowercased word tokens. Counts are derived from the
/// sentence lists so they cannot drift out of sync.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenizedDocument {
    sentences: Vec<Vec<String>>,
}

impl TokenizedDocument {
    /// Wraps pre-split sentences. Empty sentences are dropped; tokens are
    /// taken as given.
    pub fn from_sentences(sentences: Vec<Vec<String>>) -> Self {
        TokenizedDocument {
            sentences: sentences.into_iter().filter(|s| !s.is_empty()).collect(),
        }
    }

    pub fn sentences(&self) -> &[Vec<String>] {
        &self.sentences
    }

    pub fn tokens(&self) -> impl Iterator<Item = &str> {
        self.sentences.iter().flatten().map(String::as_str)
    }

    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(Vec::len).sum()
    }

    pub fn sentence_count(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    /// Appends another document's sentences after this one's.
    pub fn concat(&self, other: &TokenizedDocument) -> TokenizedDocument {
        let mut sentences = self.sentences.clone();
        sentences.extend(other.sentences.iter().cloned());
        TokenizedDocument { sentences }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tokenizer {
    abbreviations: BTreeSet<String>,
}

impl Default for Tokenizer {
    fn default() -> Self {
        Tokenizer::with_abbreviations(DEFAULT_ABBREVIATIONS.iter().copied())
    }
}

impl Tokenizer {
    pub fn with_abbreviations<I, S>(abbreviations: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let abbreviations = abbreviations
            .into_iter()
            .map(|a| normalize_abbreviation(a.as_ref()))
            .filter(|a| !a.is_empty())
            .collect();
        Tokenizer { abbreviations }
    }

    /// Parses an abbreviation list: one entry per line, `#` starts a comment
    /// line, a trailing period is optional.
    pub fn parse_abbreviations(contents: &str) -> Self {
        Tokenizer::with_abbreviations(
            contents
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#')),
        )
    }

    pub fn from_abbreviation_file(path: &Path) -> Result<Self> {
        Ok(Tokenizer::parse_abbreviations(&read_utf8(path)?))
    }

    pub fn abbreviations(&self) -> impl Iterator<Item = &str> {
        self.abbreviations.iter().map(String::as_str)
    }

    pub fn tokenize(&self, doc: &RawDocument) -> TokenizedDocument {
        self.tokenize_str(&doc.text)
    }

    pub fn tokenize_str(&self, text: &str) -> TokenizedDocument {
        let chars: Vec<char> = text.chars().collect();
        let n = chars.len();
        let mut sentences = Vec::new();
        let mut current: Vec<String> = Vec::new();
        let mut token = String::new();

        let mut i = 0;
        while i < n {
            let c = chars[i];
            if c.is_alphanumeric() {
                token.extend(c.to_lowercase());
                i += 1;
                continue;
            }
            if is_joiner(c) && !token.is_empty() && i + 1 < n && chars[i + 1].is_alphanumeric() {
                token.push(if c == '-' || c == '\u{2010}' {
                    '-'
                } else {
                    '\''
                });
                i += 1;
                continue;
            }
            if !token.is_empty() {
                current.push(std::mem::take(&mut token));
            }
            if is_terminator(c) {
                let mut run_end = i;
                while run_end < n && is_terminator(chars[run_end]) {
                    run_end += 1;
                }
                let mut after = run_end;
                while after < n && is_closer(chars[after]) {
                    after += 1;
                }
                if after == n || chars[after].is_whitespace() {
                    let suppressed = run_end - i == 1
                        && c == '.'
                        && i > 0
                        && chars[i - 1].is_alphanumeric()
                        && self.abbreviations.contains(&word_before(&chars, i));
                    if !suppressed && !current.is_empty() {
                        sentences.push(std::mem::take(&mut current));
                    }
                    i = after;
                } else {
                    i = run_end;
                }
                continue;
            }
            i += 1;
        }
        if !token.is_empty() {
            current.push(token);
        }
        if !current.is_empty() {
            sentences.push(current);
        }
        TokenizedDocument { sentences }
    }
}

/// Tokenizes with the default abbreviation list.
pub fn tokenize(doc: &RawDocument) -> TokenizedDocument {
    Tokenizer::default().tokenize(doc)
}

fn normalize_abbreviation(a: &str) -> String {
    a.trim().trim_end_matches('.').to_lowercase()
}

fn is_terminator(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

fn is_joiner(c: char) -> bool {
    matches!(c, '\'' | '\u{2019}' | '-' | '\u{2010}')
}

fn is_closer(c: char) -> bool {
    matches!(
        c,
        '"' | '\'' | '\u{201d}' | '\u{2019}' | ')' | ']' | '}' | '\u{bb}'
    )
}

/// The run of alphanumerics and periods ending just before `end`, lowercased.
fn word_before(chars: &[char], end: usize) -> String {
    let mut start = end;
    while start > 0 && (chars[start - 1].is_alphanumeric() || chars[start - 1] == '.') {
        start -= 1;
    }
    chars[start..end]
        .iter()
        .flat_map(|c| c.to_lowercase())
        .collect::<String>()
        .trim_start_matches('.')
        .to_owned()
}

/// Source of per-word syllable counts. The heuristic counter is the default;
/// a dictionary-backed counter can be slotted in instead.
pub trait SyllableCounter {
    fn count_syllables(&self, word: &str) -> Result<u32>;
}

/// Vowel-group counter with a silent-final-`e` correction.
#[derive(Debug, Clone, Copy, Default)]
pub struct HeuristicSyllables;

impl SyllableCounter for HeuristicSyllables {
    fn count_syllables(&self, word: &str) -> Result<u32> {
        count_syllables(word)
    }
}

fn is_vowel(c: char) -> bool {
    matches!(c.to_ascii_lowercase(), 'a' | 'e' | 'i' | 'o' | 'u' | 'y')
}

/// Number of vowel groups (`y` included), less one for a silent final `e`
/// unless the word ends in consonant + `le`; digit groups count one each;
/// never below 1.
pub fn count_syllables(word: &str) -> Result<u32> {
    if !word.chars().any(char::is_alphabetic) {
        return Err(Error::InvalidToken(word.to_owned()));
    }
    Ok(heuristic_count(word))
}

fn heuristic_count(word: &str) -> u32 {
    let chars: Vec<char> = word.chars().map(|c| c.to_ascii_lowercase()).collect();
    let mut groups = 0u32;
    let mut in_vowels = false;
    for &c in &chars {
        let v = is_vowel(c);
        if v && !in_vowels {
            groups += 1;
        }
        in_vowels = v;
    }

    let n = chars.len();
    if n >= 1 && chars[n - 1] == 'e' {
        let consonant_le = n >= 3
            && chars[n - 2] == 'l'
            && chars[n - 3].is_alphabetic()
            && !is_vowel(chars[n - 3]);
        if !consonant_le {
            groups = groups.saturating_sub(1);
        }
    }

    (groups + digit_groups(word)).max(1)
}

fn digit_groups(word: &str) -> u32 {
    let mut groups = 0;
    let mut in_digits = false;
    for c in word.chars() {
        let d = c.is_ascii_digit();
        if d && !in_digits {
            groups += 1;
        }
        in_digits = d;
    }
    groups
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DocumentCounts {
    pub words: usize,
    pub sentences: usize,
    pub syllables: usize,
}

pub fn document_counts(doc: &TokenizedDocument) -> DocumentCounts {
    document_counts_with(doc, &HeuristicSyllables)
        .expect("heuristic counter accepts every token with a letter")
}

/// Counts with a caller-supplied syllable counter. Tokens without letters
/// (numerals) bypass the counter and score one syllable per digit group.
pub fn document_counts_with(
    doc: &TokenizedDocument,
    counter: &dyn SyllableCounter,
) -> Result<DocumentCounts> {
    let words = doc.token_count();
    let mut syllables = 0usize;
    for token in doc.tokens() {
        let n = if token.chars().any(char::is_alphabetic) {
            counter.count_syllables(token)?
        } else {
            digit_groups(token).max(1)
        };
        syllables += n as usize;
    }
    let sentences = if words > 0 {
        doc.sentence_count().max(1)
    } else {
        0
    };
    Ok(DocumentCounts {
        words,
        sentences,
        syllables,
    })
}
