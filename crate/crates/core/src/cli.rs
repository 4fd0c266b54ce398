//! Command-line front end. Exit status: 0 success, 1 partial scoring,
//! 2 input or usage error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{read_utf8, Error, Result};
use crate::formulas::{score_document, EasyWordList};
use crate::grammar::{list_tree_corpus, train_grammar, GrammarModel};
use crate::lexical::{train_lexical, LabeledCorpus, LexicalModel};
use crate::model::{GradeModel, PriorMode, SmoothingConfig, DEFAULT_LAMBDA, DEFAULT_OOV_MASS};
use crate::pipeline::{
    aggregate, assume_2016, detect_csv_kind, filter_occasion, format_date, load_manifest,
    load_scores, score_corpus, time_series, write_scores, Column, CsvKind, FormulaConfig,
    ScoreRecord, Scorers,
};
use crate::report::write_report;
use crate::text::{RawDocument, Tokenizer};

pub const EXIT_OK: u8 = 0;
pub const EXIT_PARTIAL: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "gradelevel",
    version,
    about = "Reading grade-level analysis for speeches and other texts"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train a per-grade word model from a labelled corpus.
    TrainLexical(TrainArgs),
    /// Train a per-grade subtree model from labelled parse-tree files.
    TrainGrammar(TrainArgs),
    /// Score a manifest of speeches, or normalize a pre-scored CSV.
    Score(ScoreArgs),
    /// Per-speaker means and standard deviations, or one speaker's series.
    Analyze(AnalyzeArgs),
    /// Write SVG charts and their data tables.
    Report(ReportArgs),
    /// Flesch-Kincaid and Dale-Chall scores for one text file.
    Formulas(FormulasArgs),
}

#[derive(Debug, Args)]
pub struct SmoothingArgs {
    /// Weight of the in-grade distribution against the pooled one.
    #[arg(long, default_value_t = DEFAULT_LAMBDA)]
    pub smoothing_lambda: f64,
    /// Probability mass reserved for unseen features.
    #[arg(long, default_value_t = DEFAULT_OOV_MASS)]
    pub oov_mass: f64,
    /// Number of hypothetical unseen types sharing the reserved mass
    /// (default: 10 x vocabulary size).
    #[arg(long)]
    pub unseen_types: Option<f64>,
    /// Use grade priors proportional to document counts instead of uniform.
    #[arg(long)]
    pub proportional_priors: bool,
}

impl SmoothingArgs {
    fn config(&self, binary_features: bool) -> SmoothingConfig {
        SmoothingConfig {
            lambda: self.smoothing_lambda,
            oov_mass: self.oov_mass,
            unseen_types: self.unseen_types,
            priors: if self.proportional_priors {
                PriorMode::Proportional
            } else {
                PriorMode::Uniform
            },
            binary_features,
        }
    }
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// JSON-lines file or directory of grade-NN subdirectories.
    pub corpus: PathBuf,
    /// Model file to write.
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub smoothing: SmoothingArgs,
    /// Count each feature at most once per document.
    #[arg(long)]
    pub binary_features: bool,
    /// Abbreviation list (one per line) for sentence splitting.
    #[arg(long)]
    pub abbrev: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormulaSelection {
    All,
    Fk,
    DaleChall,
    None,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    /// Manifest CSV (speaker,date,occasion,text_path,trees_path) or a
    /// pre-scored CSV.
    pub input: PathBuf,
    #[arg(long)]
    pub lexical_model: Option<PathBuf>,
    #[arg(long)]
    pub grammar_model: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormulaSelection::All)]
    pub formulas: FormulaSelection,
    #[arg(long)]
    pub easy_words: Option<PathBuf>,
    #[arg(long)]
    pub abbrev: Option<PathBuf>,
    /// Correct the fixture's 2015 Nevada date to 2016.
    #[arg(long)]
    pub assume_2016: bool,
    /// Output CSV (default: standard output).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Scores CSV.
    pub scores: PathBuf,
    /// Columns to aggregate (default: lexical and grammar).
    #[arg(long, value_parser = parse_column)]
    pub column: Vec<Column>,
    /// Keep only records whose occasion contains this text (case-insensitive).
    #[arg(long)]
    pub occasion: Option<String>,
    /// Print this speaker's time series instead of aggregates.
    #[arg(long)]
    pub speaker: Option<String>,
    #[arg(long)]
    pub assume_2016: bool,
    #[arg(long)]
    pub json: bool,
}

fn parse_column(s: &str) -> std::result::Result<Column, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Scores CSV.
    pub scores: PathBuf,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub assume_2016: bool,
}

#[derive(Debug, Args)]
pub struct FormulasArgs {
    pub text: PathBuf,
    #[arg(long)]
    pub easy_words: Option<PathBuf>,
    #[arg(long)]
    pub abbrev: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

/// Runs a parsed command, writing results to `out` and diagnostics to
/// standard error. Returns the exit status.
pub fn run(cli: Cli, out: &mut dyn Write) -> u8 {
    let result = match cli.command {
        Command::TrainLexical(a) => cmd_train_lexical(&a, out),
        Command::TrainGrammar(a) => cmd_train_grammar(&a, out),
        Command::Score(a) => cmd_score(&a, out),
        Command::Analyze(a) => cmd_analyze(&a, out),
        Command::Report(a) => cmd_report(&a, out),
        Command::Formulas(a) => cmd_formulas(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::io("<output>", e)
}

fn tokenizer(abbrev: Option<&Path>) -> Result<Tokenizer> {
    abbrev.map_or_else(
        || Ok(Tokenizer::default()),
        Tokenizer::from_abbreviation_file,
    )
}

fn easy_words(path: Option<&Path>) -> Result<EasyWordList> {
    path.map_or_else(|| Ok(EasyWordList::bundled()), EasyWordList::from_file)
}

fn print_summary(out: &mut dyn Write, model: &GradeModel, path: &Path) -> Result<()> {
    let grades: Vec<String> = model.grades().iter().map(ToString::to_string).collect();
    writeln!(out, "wrote {}", path.display()).map_err(io_err)?;
    writeln!(out, "feature kind: {}", model.feature_kind()).map_err(io_err)?;
    writeln!(out, "grades: {}", grades.join(",")).map_err(io_err)?;
    writeln!(out, "features: {}", model.vocabulary_size()).map_err(io_err)?;
    Ok(())
}

pub fn cmd_train_lexical(args: &TrainArgs, out: &mut dyn Write) -> Result<u8> {
    let t = tokenizer(args.abbrev.as_deref())?;
    let corpus = LabeledCorpus::load(&args.corpus, &t)?;
    let model: LexicalModel = train_lexical(&corpus, &args.smoothing.config(args.binary_features))?;
    model.save(&args.out)?;
    print_summary(out, model.model(), &args.out)?;
    Ok(EXIT_OK)
}

pub fn cmd_train_grammar(args: &TrainArgs, out: &mut dyn Write) -> Result<u8> {
    let files = list_tree_corpus(&args.corpus)?;
    let model: GrammarModel = train_grammar(&files, &args.smoothing.config(args.binary_features))?;
    model.save(&args.out)?;
    print_summary(out, model.model(), &args.out)?;
    Ok(EXIT_OK)
}

fn emit_scores(records: &[ScoreRecord], dest: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    match dest {
        Some(path) => {
            let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
            write_scores(file, records)
        }
        None => write_scores(out, records),
    }
}

pub fn cmd_score(args: &ScoreArgs, out: &mut dyn Write) -> Result<u8> {
    if detect_csv_kind(&args.input)? == CsvKind::Scores {
        let mut records = load_scores(&args.input)?;
        if args.assume_2016 {
            assume_2016(&mut records);
        }
        emit_scores(&records, args.out.as_deref(), out)?;
        return Ok(EXIT_OK);
    }

    let entries = load_manifest(&args.input)?;
    let lexical = args
        .lexical_model
        .as_deref()
        .map(LexicalModel::load)
        .transpose()?;
    let grammar = args
        .grammar_model
        .as_deref()
        .map(GrammarModel::load)
        .transpose()?;
    let formulas = match args.formulas {
        FormulaSelection::None => None,
        sel => Some(FormulaConfig {
            flesch_kincaid: matches!(sel, FormulaSelection::All | FormulaSelection::Fk),
            dale_chall: matches!(sel, FormulaSelection::All | FormulaSelection::DaleChall),
            easy_words: easy_words(args.easy_words.as_deref())?,
        }),
    };
    let scorers = Scorers {
        tokenizer: tokenizer(args.abbrev.as_deref())?,
        lexical: lexical.as_ref(),
        grammar: grammar.as_ref(),
        formulas,
    };
    let scored = score_corpus(&entries, &scorers);
    let partial = scored.iter().filter(|s| s.is_partial()).count();
    let mut records: Vec<ScoreRecord> = scored.into_iter().map(|s| s.record).collect();
    if args.assume_2016 {
        assume_2016(&mut records);
    }
    emit_scores(&records, args.out.as_deref(), out)?;
    if partial > 0 {
        eprintln!(
            "warning: {partial} of {} entries only partially scored",
            records.len()
        );
        Ok(EXIT_PARTIAL)
    } else {
        Ok(EXIT_OK)
    }
}

#[derive(Serialize)]
struct AggregateRow<'a> {
    column: &'a str,
    group: &'a str,
    mean: f64,
    sd: Option<f64>,
    n: usize,
}

#[derive(Serialize)]
struct SeriesRow {
    date: String,
    occasion: String,
    lexical: Option<u8>,
    grammar: Option<f64>,
}

pub fn cmd_analyze(args: &AnalyzeArgs, out: &mut dyn Write) -> Result<u8> {
    let mut records = load_scores(&args.scores)?;
    if args.assume_2016 {
        assume_2016(&mut records);
    }
    if let Some(sub) = &args.occasion {
        records = filter_occasion(&records, sub);
    }

    if let Some(speaker) = &args.speaker {
        let rows: Vec<SeriesRow> = time_series(&records, speaker)
            .into_iter()
            .map(|p| SeriesRow {
                date: format_date(p.date),
                occasion: p.occasion,
                lexical: p.lexical.map(|g| g.value()),
                grammar: p.grammar,
            })
            .collect();
        if args.json {
            serde_json::to_writer_pretty(&mut *out, &rows)?;
            writeln!(out).map_err(io_err)?;
        } else {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(&mut *out);
            w.write_record(["date", "occasion", "lexical", "grammar"])?;
            for r in &rows {
                w.write_record([
                    r.date.clone(),
                    r.occasion.clone(),
                    r.lexical.map(|v| v.to_string()).unwrap_or_default(),
                    r.grammar.map(|v| v.to_string()).unwrap_or_default(),
                ])?;
            }
            w.flush().map_err(io_err)?;
        }
        return Ok(EXIT_OK);
    }

    let columns = if args.column.is_empty() {
        vec![Column::Lexical, Column::Grammar]
    } else {
        args.column.clone()
    };
    let stats: Vec<(Column, Vec<_>)> = columns
        .iter()
        .map(|&c| (c, aggregate(&records, c)))
        .collect();
    let rows: Vec<AggregateRow> = stats
        .iter()
        .flat_map(|(c, s)| {
            s.iter().map(move |a| AggregateRow {
                column: c.name(),
                group: &a.group_key,
                mean: a.mean,
                sd: a.sd,
                n: a.n,
            })
        })
        .collect();
    if args.json {
        serde_json::to_writer_pretty(&mut *out, &rows)?;
        writeln!(out).map_err(io_err)?;
    } else {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(&mut *out);
        w.write_record(["column", "group", "mean", "sd", "n"])?;
        for r in &rows {
            w.write_record([
                r.column.to_owned(),
                r.group.to_owned(),
                format!("{:.4}", r.mean),
                r.sd.map(|v| format!("{v:.4}")).unwrap_or_default(),
                r.n.to_string(),
            ])?;
        }
        w.flush().map_err(io_err)?;
    }
    Ok(EXIT_OK)
}

pub fn cmd_report(args: &ReportArgs, out: &mut dyn Write) -> Result<u8> {
    let mut records = load_scores(&args.scores)?;
    if args.assume_2016 {
        assume_2016(&mut records);
    }
    let written = write_report(&records, &args.out)?;
    let svgs = written.iter().filter(|n| n.ends_with(".svg")).count();
    writeln!(
        out,
        "wrote {svgs} charts ({} files) to {}",
        written.len(),
        args.out.display()
    )
    .map_err(io_err)?;
    Ok(EXIT_OK)
}

pub fn cmd_formulas(args: &FormulasArgs, out: &mut dyn Write) -> Result<u8> {
    let text = read_utf8(&args.text)?;
    let doc = tokenizer(args.abbrev.as_deref())?
        .tokenize(&RawDocument::new(args.text.display().to_string(), text));
    let report = score_document(&doc, &easy_words(args.easy_words.as_deref())?)?;
    if args.json {
        serde_json::to_writer_pretty(&mut *out, &report)?;
        writeln!(out).map_err(io_err)?;
    } else {
        writeln!(
            out,
            "words: {}\nsentences: {}\nsyllables: {}\ndifficult_words: {}\nflesch_kincaid: {:.4}\ndale_chall: {:.4}",
            report.words,
            report.sentences,
            report.syllables,
            report.difficult_words,
            report.flesch_kincaid,
            report.dale_chall
        )
        .map_err(io_err)?;
    }
    Ok(EXIT_OK)
}
