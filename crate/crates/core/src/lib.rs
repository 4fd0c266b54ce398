//! Reading grade-level analysis.
//!
//! * [`text`]: tokens, sentences, syllables.
//! * [`formulas`]: Flesch-Kincaid and Dale-Chall.
//! * [`lexical`] / [`grammar`]: per-grade word and parse-subtree models
//!   built on the shared [`model`] engine.
//! * [`pipeline`]: manifests, batch scoring, per-speaker aggregates.
//! * [`chart`] / [`report`]: deterministic SVG output.

pub mod chart;
pub mod cli;
pub mod error;
pub mod formulas;
pub mod grammar;
pub mod lexical;
pub mod model;
pub mod pipeline;
pub mod report;
pub mod text;

pub use error::{Error, Result};
pub use formulas::{count_difficult, dale_chall, flesch_kincaid, EasyWordList, FormulaScore};
pub use grammar::{
    extract_subtrees, grammar_grade, parse_ptb, train_grammar, GrammarModel, ParseTree,
};
pub use lexical::{train_lexical, LabeledCorpus, LexicalModel};
pub use model::{GradeLevel, SmoothingConfig};
pub use pipeline::{
    aggregate, filter_occasion, load_manifest, score_corpus, time_series, ScoreRecord,
};
pub use text::{
    count_syllables, document_counts, tokenize, RawDocument, TokenizedDocument, Tokenizer,
};
