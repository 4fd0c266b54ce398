//! Corpus manifests, batch scoring, and per-speaker aggregates.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::formulas::{count_difficult, dale_chall, flesch_kincaid, EasyWordList};
use crate::grammar::{grammar_grade, read_tree_file, GrammarModel};
use crate::lexical::LexicalModel;
use crate::model::GradeLevel;
use crate::text::{document_counts, RawDocument, Tokenizer};

pub const MANIFEST_HEADER: [&str; 5] = ["speaker", "date", "occasion", "text_path", "trees_path"];
pub const SCORES_HEADER: [&str; 7] = [
    "speaker",
    "date",
    "occasion",
    "lexical",
    "grammar",
    "fk",
    "dale_chall",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub speaker: String,
    pub date: NaiveDate,
    pub occasion: String,
    pub text_path: Option<PathBuf>,
    pub trees_path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreRecord {
    pub speaker: String,
    pub date: NaiveDate,
    pub occasion: String,
    pub lexical: Option<GradeLevel>,
    pub grammar: Option<f64>,
    pub fk: Option<f64>,
    pub dale_chall: Option<f64>,
}

impl ScoreRecord {
    pub fn value(&self, column: Column) -> Option<f64> {
        match column {
            Column::Lexical => self.lexical.map(|g| f64::from(g.value())),
            Column::Grammar => self.grammar,
            Column::Fk => self.fk,
            Column::DaleChall => self.dale_chall,
        }
    }

    pub fn has_any_score(&self) -> bool {
        Column::ALL.iter().any(|&c| self.value(c).is_some())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Column {
    Lexical,
    Grammar,
    Fk,
    DaleChall,
}

impl Column {
    pub const ALL: [Column; 4] = [
        Column::Lexical,
        Column::Grammar,
        Column::Fk,
        Column::DaleChall,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Column::Lexical => "lexical",
            Column::Grammar => "grammar",
            Column::Fk => "fk",
            Column::DaleChall => "dale_chall",
        }
    }
}

impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Column {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Column::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Format(format!("unknown score column {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateStats {
    pub group_key: String,
    pub mean: f64,
    /// Sample standard deviation; absent for a single value.
    pub sd: Option<f64>,
    pub n: usize,
}

/// Accepts `M/D/YYYY` and ISO `YYYY-MM-DD`.
pub fn parse_date(s: &str) -> Result<NaiveDate> {
    let s = s.trim();
    NaiveDate::parse_from_str(s, "%Y-%m-%d")
        .or_else(|_| NaiveDate::parse_from_str(s, "%m/%d/%Y"))
        .map_err(|_| Error::Format(format!("unparseable date {s:?}")))
}

pub fn format_date(d: NaiveDate) -> String {
    d.format("%Y-%m-%d").to_string()
}

fn column_index(headers: &csv::StringRecord, name: &str) -> Result<usize> {
    headers
        .iter()
        .position(|h| h.trim() == name)
        .ok_or_else(|| Error::Format(format!("missing column {name:?}")))
}

fn row_error(path: &Path, record: &csv::StringRecord, message: impl Into<String>) -> Error {
    Error::Located {
        path: path.to_owned(),
        line: record.position().map_or(0, |p| p.line() as usize),
        message: message.into(),
    }
}

fn non_empty(s: &str) -> Option<&str> {
    let s = s.trim();
    (!s.is_empty()).then_some(s)
}

/// Loads a manifest. Relative file paths resolve against the manifest's
/// directory.
pub fn load_manifest(path: &Path) -> Result<Vec<ManifestEntry>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    read_manifest(file, path, base)
}

pub fn read_manifest<R: Read>(reader: R, source: &Path, base: &Path) -> Result<Vec<ManifestEntry>> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let idx: Vec<usize> = MANIFEST_HEADER
        .iter()
        .map(|c| column_index(&headers, c))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let field = |i: usize| rec.get(idx[i]).unwrap_or("");
        let speaker =
            non_empty(field(0)).ok_or_else(|| row_error(source, &rec, "empty speaker"))?;
        let date = parse_date(field(1)).map_err(|e| row_error(source, &rec, e.to_string()))?;
        let occasion =
            non_empty(field(2)).ok_or_else(|| row_error(source, &rec, "empty occasion"))?;
        let text_path = non_empty(field(3)).map(|p| base.join(p));
        let trees_path = non_empty(field(4)).map(|p| base.join(p));
        if text_path.is_none() && trees_path.is_none() {
            return Err(row_error(
                source,
                &rec,
                "neither text_path nor trees_path given",
            ));
        }
        out.push(ManifestEntry {
            speaker: speaker.to_owned(),
            date,
            occasion: occasion.to_owned(),
            text_path,
            trees_path,
        });
    }
    Ok(out)
}

/// What kind of CSV a file holds, judged from its header.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsvKind {
    Manifest,
    Scores,
}

pub fn detect_csv_kind(path: &Path) -> Result<CsvKind> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(file);
    let headers = rdr.headers()?;
    let has = |name: &str| headers.iter().any(|h| h.trim() == name);
    if has("lexical") && has("grammar") && !has("text_path") {
        Ok(CsvKind::Scores)
    } else {
        Ok(CsvKind::Manifest)
    }
}

pub fn load_scores(path: &Path) -> Result<Vec<ScoreRecord>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_scores(file, path)
}

fn parse_opt_f64(s: &str) -> std::result::Result<Option<f64>, String> {
    match non_empty(s) {
        None => Ok(None),
        Some(v) => v
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .map(Some)
            .ok_or_else(|| format!("bad number {v:?}")),
    }
}

pub fn read_scores<R: Read>(reader: R, source: &Path) -> Result<Vec<ScoreRecord>> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let idx: Vec<usize> = SCORES_HEADER
        .iter()
        .map(|c| column_index(&headers, c))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let field = |i: usize| rec.get(idx[i]).unwrap_or("");
        let err = |m: String| row_error(source, &rec, m);
        let speaker = non_empty(field(0)).ok_or_else(|| err("empty speaker".into()))?;
        let date = parse_date(field(1)).map_err(|e| err(e.to_string()))?;
        let occasion = non_empty(field(2)).ok_or_else(|| err("empty occasion".into()))?;
        let lexical = match non_empty(field(3)) {
            None => None,
            Some(v) => {
                let n: i64 = v
                    .parse()
                    .map_err(|_| err(format!("bad lexical grade {v:?}")))?;
                Some(GradeLevel::new(n).map_err(|e| err(e.to_string()))?)
            }
        };
        let grammar = parse_opt_f64(field(4)).map_err(err)?;
        if let Some(g) = grammar {
            if !(1.0..=12.0).contains(&g) {
                return Err(err(format!("grammar grade {g} outside [1, 12]")));
            }
        }
        let fk = parse_opt_f64(field(5)).map_err(err)?;
        let dale_chall = parse_opt_f64(field(6)).map_err(err)?;
        out.push(ScoreRecord {
            speaker: speaker.to_owned(),
            date,
            occasion: occasion.to_owned(),
            lexical,
            grammar,
            fk,
            dale_chall,
        });
    }
    Ok(out)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Writes the scores table with ISO dates and empty cells for absent values.
pub fn write_scores<W: Write>(writer: W, records: &[ScoreRecord]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(writer);
    w.write_record(SCORES_HEADER)?;
    for r in records {
        w.write_record([
            r.speaker.clone(),
            format_date(r.date),
            r.occasion.clone(),
            r.lexical.map(|g| g.to_string()).unwrap_or_default(),
            fmt_opt(r.grammar),
            fmt_opt(r.fk),
            fmt_opt(r.dale_chall),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<scores output>", e))?;
    Ok(())
}

pub fn scores_to_string(records: &[ScoreRecord]) -> Result<String> {
    let mut buf = Vec::new();
    write_scores(&mut buf, records)?;
    Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
}

/// Which closed-form formulas to compute.
#[derive(Debug, Clone)]
pub struct FormulaConfig {
    pub flesch_kincaid: bool,
    pub dale_chall: bool,
    pub easy_words: EasyWordList,
}

impl Default for FormulaConfig {
    fn default() -> Self {
        FormulaConfig {
            flesch_kincaid: true,
            dale_chall: true,
            easy_words: EasyWordList::bundled(),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Scorers<'a> {
    pub tokenizer: Tokenizer,
    pub lexical: Option<&'a LexicalModel>,
    pub grammar: Option<&'a GrammarModel>,
    pub formulas: Option<FormulaConfig>,
}

/// One scored entry plus whatever went wrong with it. An entry with issues
/// is partial.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredEntry {
    pub record: ScoreRecord,
    pub issues: Vec<String>,
}

impl ScoredEntry {
    pub fn is_partial(&self) -> bool {
        !self.issues.is_empty()
    }
}

/// Scores every entry, in parallel, returning results in manifest order.
/// Missing inputs or unreadable files leave the affected fields empty and
/// are reported as issues; scoring never stops early.
pub fn score_corpus(entries: &[ManifestEntry], scorers: &Scorers<'_>) -> Vec<ScoredEntry> {
    let out: Vec<ScoredEntry> = entries
        .par_iter()
        .map(|e| score_entry(e, scorers))
        .collect();
    for (e, s) in entries.iter().zip(&out) {
        for issue in &s.issues {
            log::warn!(
                "{} {} {}: {issue}",
                e.speaker,
                format_date(e.date),
                e.occasion
            );
        }
    }
    out
}

fn score_entry(entry: &ManifestEntry, scorers: &Scorers<'_>) -> ScoredEntry {
    let mut record = ScoreRecord {
        speaker: entry.speaker.clone(),
        date: entry.date,
        occasion: entry.occasion.clone(),
        lexical: None,
        grammar: None,
        fk: None,
        dale_chall: None,
    };
    let mut issues = Vec::new();
    let wants_text = scorers.lexical.is_some()
        || scorers
            .formulas
            .as_ref()
            .is_some_and(|f| f.flesch_kincaid || f.dale_chall);

    if wants_text {
        let doc = match &entry.text_path {
            None => {
                issues.push("no text_path; text scores skipped".to_owned());
                None
            }
            Some(path) => match std::fs::read(path) {
                Err(e) => {
                    issues.push(format!("{}: {e}", path.display()));
                    None
                }
                Ok(bytes) => match RawDocument::from_bytes(path.display().to_string(), &bytes) {
                    Err(e) => {
                        issues.push(format!("{}: {e}", path.display()));
                        None
                    }
                    Ok(raw) => Some(scorers.tokenizer.tokenize(&raw)),
                },
            },
        };
        if let Some(doc) = doc {
            if let Some(model) = scorers.lexical {
                match model.classify_map(&doc) {
                    Ok(g) => record.lexical = Some(g),
                    Err(e) => issues.push(format!("lexical: {e}")),
                }
            }
            if let Some(cfg) = &scorers.formulas {
                let counts = document_counts(&doc);
                if cfg.flesch_kincaid {
                    match flesch_kincaid(counts.words, counts.sentences, counts.syllables) {
                        Ok(s) => record.fk = Some(s.value),
                        Err(e) => issues.push(format!("flesch-kincaid: {e}")),
                    }
                }
                if cfg.dale_chall {
                    let difficult = count_difficult(&doc, &cfg.easy_words);
                    match dale_chall(counts.words, counts.sentences, difficult) {
                        Ok(s) => record.dale_chall = Some(s.value),
                        Err(e) => issues.push(format!("dale-chall: {e}")),
                    }
                }
            }
        }
    }

    if let Some(model) = scorers.grammar {
        match &entry.trees_path {
            None => issues.push("no trees_path; grammar score skipped".to_owned()),
            Some(path) => match read_tree_file(path).and_then(|t| grammar_grade(model, &t)) {
                Ok(g) => record.grammar = Some(g),
                Err(e) => issues.push(format!("grammar: {e}")),
            },
        }
    }

    ScoredEntry { record, issues }
}

/// Mean and sample standard deviation of `column` per speaker, sorted by
/// speaker. Records lacking the column are left out; a speaker with no
/// values at all is skipped with a warning.
pub fn aggregate(records: &[ScoreRecord], column: Column) -> Vec<AggregateStats> {
    let mut groups: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for r in records {
        let values = groups.entry(r.speaker.as_str()).or_default();
        if let Some(v) = r.value(column) {
            values.push(v);
        }
    }
    let mut out = Vec::new();
    for (speaker, mut values) in groups {
        if values.is_empty() {
            log::warn!("{speaker}: no {column} values, group skipped");
            continue;
        }
        // Fixed summation order keeps the result independent of record order.
        values.sort_by(f64::total_cmp);
        out.push(summarize(speaker, &values));
    }
    out
}

fn summarize(key: &str, values: &[f64]) -> AggregateStats {
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let sd = (n > 1).then(|| {
        let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
        (ss / (n - 1) as f64).sqrt()
    });
    AggregateStats {
        group_key: key.to_owned(),
        mean,
        sd,
        n,
    }
}

/// Records whose occasion contains `substring`, ignoring case.
pub fn filter_occasion(records: &[ScoreRecord], substring: &str) -> Vec<ScoreRecord> {
    let needle = substring.to_lowercase();
    records
        .iter()
        .filter(|r| r.occasion.to_lowercase().contains(&needle))
        .cloned()
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesPoint {
    pub date: NaiveDate,
    pub occasion: String,
    pub lexical: Option<GradeLevel>,
    pub grammar: Option<f64>,
}

/// One speaker's records by date ascending; equal dates are ordered by
/// occasion.
pub fn time_series(records: &[ScoreRecord], speaker: &str) -> Vec<SeriesPoint> {
    let mut points: Vec<SeriesPoint> = records
        .iter()
        .filter(|r| r.speaker == speaker)
        .map(|r| SeriesPoint {
            date: r.date,
            occasion: r.occasion.clone(),
            lexical: r.lexical,
            grammar: r.grammar,
        })
        .collect();
    points.sort_by(|a, b| {
        a.date
            .cmp(&b.date)
            .then_with(|| a.occasion.cmp(&b.occasion))
    });
    points
}

/// Distinct speakers, sorted.
pub fn speakers(records: &[ScoreRecord]) -> Vec<String> {
    let mut s: Vec<String> = records.iter().map(|r| r.speaker.clone()).collect();
    s.sort();
    s.dedup();
    s
}

/// Moves the fixture's "Sanders, 2/20/2015, Nevada" row to 2016, the year of
/// the Nevada contest. Returns how many records changed.
pub fn assume_2016(records: &mut [ScoreRecord]) -> usize {
    let printed = NaiveDate::from_ymd_opt(2015, 2, 20).expect("valid date");
    let corrected = NaiveDate::from_ymd_opt(2016, 2, 20).expect("valid date");
    let mut changed = 0;
    for r in records.iter_mut() {
        if r.speaker == "Sanders" && r.date == printed && r.occasion.contains("Nevada") {
            r.date = corrected;
            changed += 1;
        }
    }
    changed
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture() -> Vec<ScoreRecord> {
        load_scores(&Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/appendix_scores.csv"))
            .unwrap()
    }

    fn rec(speaker: &str, lexical: Option<i64>, grammar: Option<f64>) -> ScoreRecord {
        ScoreRecord {
            speaker: speaker.into(),
            date: NaiveDate::from_ymd_opt(2016, 1, 1).unwrap(),
            occasion: "x".into(),
            lexical: lexical.map(|g| GradeLevel::new(g).unwrap()),
            grammar,
            fk: None,
            dale_chall: None,
        }
    }

    #[test]
    fn dates() {
        assert_eq!(
            parse_date("2/1/2016").unwrap(),
            parse_date("2016-02-01").unwrap()
        );
        assert_eq!(parse_date("12/30/2015").unwrap().to_string(), "2015-12-30");
        assert!(parse_date("2016/02/01").is_err());
        assert!(parse_date("2/30/2016").is_err());
    }

    #[test]
    fn manifest_parsing() {
        let csv = "speaker,date,occasion,text_path,trees_path\n\
                   Cruz,2/1/2016,Iowa,a.txt,\n\
                   Trump,2016-02-01,Iowa,,b.trees\n";
        let m = read_manifest(csv.as_bytes(), Path::new("m.csv"), Path::new("/base")).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m[0].date, m[1].date);
        assert_eq!(m[0].text_path.as_deref(), Some(Path::new("/base/a.txt")));
        assert_eq!(m[0].trees_path, None);
        assert_eq!(m[1].trees_path.as_deref(), Some(Path::new("/base/b.trees")));

        let header_only = "speaker,date,occasion,text_path,trees_path\n";
        assert!(
            read_manifest(header_only.as_bytes(), Path::new("m"), Path::new("."))
                .unwrap()
                .is_empty()
        );
    }

    #[test]
    fn manifest_errors() {
        let missing = "speaker,date,occasion,text_path\nA,1/1/2016,x,a\n";
        let err = read_manifest(missing.as_bytes(), Path::new("m"), Path::new(".")).unwrap_err();
        assert!(err.to_string().contains("trees_path"), "{err}");

        let bad_date =
            "speaker,date,occasion,text_path,trees_path\nA,1/1/2016,x,a,\nB,13/45/2016,y,b,\n";
        let err = read_manifest(bad_date.as_bytes(), Path::new("m"), Path::new(".")).unwrap_err();
        assert!(matches!(err, Error::Located { line: 3, .. }), "{err}");

        let no_paths = "speaker,date,occasion,text_path,trees_path\nA,1/1/2016,x,,\n";
        assert!(read_manifest(no_paths.as_bytes(), Path::new("m"), Path::new(".")).is_err());
    }

    #[test]
    fn fixture_loads() {
        let f = fixture();
        assert_eq!(f.len(), 32);
        assert_eq!(
            speakers(&f),
            vec!["Cruz", "Hclinton", "Rubio", "Sanders", "Trump"]
        );
        assert!(f.iter().all(|r| r.lexical.is_some() && r.grammar.is_some()));
        assert_eq!(
            f[9].occasion,
            "Schomburg Center for Research in Black Culture in Harlem, New York"
        );
    }

    #[test]
    fn scores_round_trip_is_stable() {
        let f = fixture();
        let once = scores_to_string(&f).unwrap();
        let back = read_scores(once.as_bytes(), Path::new("x")).unwrap();
        assert_eq!(back, f);
        assert_eq!(scores_to_string(&back).unwrap(), once);
        assert!(once.contains("Cruz,2015-01-24,Iowa Freedom Summit,8,6.187697,,\n"));
        assert!(once.contains("Cruz,2014-03-07,CPAC 2014,8,6.41353,,\n"));
    }

    #[test]
    fn scores_validation() {
        let bad = "speaker,date,occasion,lexical,grammar,fk,dale_chall\nA,1/1/2016,x,13,,,\n";
        assert!(read_scores(bad.as_bytes(), Path::new("s")).is_err());
        let bad = "speaker,date,occasion,lexical,grammar,fk,dale_chall\nA,1/1/2016,x,,0.5,,\n";
        assert!(read_scores(bad.as_bytes(), Path::new("s")).is_err());
        let bad = "speaker,date,occasion,lexical,grammar,fk,dale_chall\nA,1/1/2016,x,,,abc,\n";
        assert!(read_scores(bad.as_bytes(), Path::new("s")).is_err());
    }

    #[test]
    fn cruz_lexical_aggregate() {
        let stats = aggregate(&fixture(), Column::Lexical);
        let cruz = &stats[0];
        assert_eq!(cruz.group_key, "Cruz");
        assert_eq!(cruz.n, 5);
        assert!((cruz.mean - 8.4).abs() < 1e-12);
        // sqrt(((3 * 0.4^2) + (2 * 0.6^2)) / 4) = sqrt(0.3)
        assert!((cruz.sd.unwrap() - 0.3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn trump_grammar_mean() {
        let stats = aggregate(&fixture(), Column::Grammar);
        let trump = stats.iter().find(|s| s.group_key == "Trump").unwrap();
        let hand =
            (5.010573 + 5.585185 + 5.069559 + 5.292973 + 8.858361 + 5.816861 + 4.142561 + 6.210023)
                / 8.0;
        assert!((trump.mean - hand).abs() < 1e-12);
        assert!((trump.mean - 5.7483).abs() < 1e-4);
    }

    #[test]
    fn aggregate_edge_cases() {
        let recs = vec![
            rec("A", Some(7), None),
            rec("B", None, Some(3.0)),
            rec("B", None, Some(3.0)),
            rec("B", None, Some(3.0)),
            rec("C", None, None),
        ];
        let lex = aggregate(&recs, Column::Lexical);
        assert_eq!(lex.len(), 1);
        assert_eq!(lex[0].n, 1);
        assert_eq!(lex[0].sd, None);
        let gram = aggregate(&recs, Column::Grammar);
        assert_eq!(gram.len(), 1);
        assert_eq!((gram[0].mean, gram[0].sd), (3.0, Some(0.0)));
        assert!(aggregate(&[], Column::Grammar).is_empty());
    }

    #[test]
    fn occasion_filter() {
        let f = fixture();
        let ann = filter_occasion(&f, "campaign announcement");
        assert_eq!(ann.len(), 5);
        assert_eq!(speakers(&ann).len(), 5);
        assert!(filter_occasion(&f, "zzz").is_empty());
        assert_eq!(filter_occasion(&f, "").len(), f.len());
    }

    #[test]
    fn trump_series() {
        let s = time_series(&fixture(), "Trump");
        assert_eq!(s.len(), 8);
        assert_eq!(s[0].date, parse_date("3/15/2013").unwrap());
        assert_eq!(s[0].occasion, "CPAC 2013");
        assert_eq!(s[7].date, parse_date("3/1/2016").unwrap());
        assert!(s.windows(2).all(|w| w[0].date <= w[1].date));
        assert!(time_series(&fixture(), "Nobody").is_empty());
        assert!(time_series(&[], "Trump").is_empty());
    }

    #[test]
    fn equal_dates_order_by_occasion() {
        let mut a = rec("A", Some(3), None);
        a.occasion = "zeta".into();
        let mut b = rec("A", Some(4), None);
        b.occasion = "alpha".into();
        let s = time_series(&[a, b], "A");
        assert_eq!(s[0].occasion, "alpha");
    }

    #[test]
    fn assume_2016_moves_one_row() {
        let mut f = fixture();
        assert_eq!(assume_2016(&mut f), 1);
        let s = time_series(&f, "Sanders");
        assert_eq!(s[0].date, parse_date("5/26/2015").unwrap());
        assert_eq!(s[3].date, parse_date("2016-02-10").unwrap());
        assert_eq!(s[4].date, parse_date("2016-02-20").unwrap());
    }

    #[test]
    fn scoring_reports_missing_inputs() {
        let dir = tempfile::tempdir().unwrap();
        let text = dir.path().join("a.txt");
        std::fs::write(&text, "We will win. We will be successful!").unwrap();
        let entry = ManifestEntry {
            speaker: "A".into(),
            date: parse_date("2016-01-01").unwrap(),
            occasion: "rally".into(),
            text_path: Some(text),
            trees_path: None,
        };
        let tree_doc = vec![crate::grammar::parse_ptb("(S (NP (NN a)) (VP (VBD b)))").unwrap()];
        let other = vec![crate::grammar::parse_ptb("(S (VP (VBD b)))").unwrap()];
        let gm = crate::grammar::train_grammar_trees(
            &[
                (tree_doc, GradeLevel::new(2).unwrap()),
                (other, GradeLevel::new(3).unwrap()),
            ],
            &Default::default(),
        )
        .unwrap();
        let scorers = Scorers {
            grammar: Some(&gm),
            formulas: Some(FormulaConfig::default()),
            ..Scorers::default()
        };
        let out = score_corpus(std::slice::from_ref(&entry), &scorers);
        assert_eq!(out.len(), 1);
        assert!(out[0].is_partial());
        assert!(out[0].record.grammar.is_none());
        assert!(out[0].record.fk.is_some() && out[0].record.dale_chall.is_some());

        let mut missing = entry.clone();
        missing.text_path = Some(dir.path().join("nope.txt"));
        let out = score_corpus(
            &[entry, missing],
            &Scorers {
                formulas: Some(FormulaConfig::default()),
                ..Scorers::default()
            },
        );
        assert!(!out[0].is_partial());
        assert!(out[1].is_partial());
        assert!(!out[1].record.has_any_score());
        assert!(score_corpus(&[], &Scorers::default()).is_empty());
    }
}
