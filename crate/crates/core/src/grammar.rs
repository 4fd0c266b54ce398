//! Syntactic grade estimation from constituency parses.
//!
//! Trees come in as Penn-Treebank brackets, one sentence per line. Word
//! leaves are dropped, which leaves a label tree whose leaves are POS tags.
//! From every label-tree node with children we take the depth-1, 2 and 3
//! truncations rooted there (depth 1 is the node plus its immediate
//! children). A truncation identical to the previous depth is skipped since
//! it shows no new level. The resulting patterns are the features of a
//! per-grade multinomial model.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{read_utf8, Error, Result};
use crate::lexical::read_grade_dirs;
use crate::model::{
    distinct_grades, FeatureCounts, FeatureKind, GradeLevel, GradeModel, SmoothingConfig,
};

pub const MAX_PATTERN_DEPTH: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseTree {
    Node {
        label: String,
        children: Vec<ParseTree>,
    },
    Leaf(String),
}

impl ParseTree {
    pub fn node(label: impl Into<String>, children: Vec<ParseTree>) -> Self {
        ParseTree::Node {
            label: label.into(),
            children,
        }
    }

    pub fn leaf(token: impl Into<String>) -> Self {
        ParseTree::Leaf(token.into())
    }

    pub fn label(&self) -> Option<&str> {
        match self {
            ParseTree::Node { label, .. } => Some(label),
            ParseTree::Leaf(_) => None,
        }
    }

    pub fn is_preterminal(&self) -> bool {
        match self {
            ParseTree::Node { children, .. } => {
                children.iter().all(|c| matches!(c, ParseTree::Leaf(_)))
            }
            ParseTree::Leaf(_) => false,
        }
    }

    pub fn internal_node_count(&self) -> usize {
        match self {
            ParseTree::Node { children, .. } => {
                1 + children
                    .iter()
                    .map(ParseTree::internal_node_count)
                    .sum::<usize>()
            }
            ParseTree::Leaf(_) => 0,
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            ParseTree::Node { children, .. } => children.iter().map(ParseTree::leaf_count).sum(),
            ParseTree::Leaf(_) => 1,
        }
    }

    /// Depth of the label tree (word leaves not counted).
    pub fn depth(&self) -> usize {
        match self {
            ParseTree::Node { children, .. } => {
                1 + children.iter().map(ParseTree::depth).max().unwrap_or(0)
            }
            ParseTree::Leaf(_) => 0,
        }
    }

    pub fn leaves(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            ParseTree::Node { children, .. } => children.iter().for_each(|c| c.collect_leaves(out)),
            ParseTree::Leaf(t) => out.push(t),
        }
    }

    /// Copy of the tree with every leaf token passed through `f`.
    pub fn map_leaves(&self, f: &mut impl FnMut(&str) -> String) -> ParseTree {
        match self {
            ParseTree::Node { label, children } => ParseTree::Node {
                label: label.clone(),
                children: children.iter().map(|c| c.map_leaves(f)).collect(),
            },
            ParseTree::Leaf(t) => ParseTree::Leaf(f(t)),
        }
    }

    fn write_brackets(&self, out: &mut String) {
        match self {
            ParseTree::Node { label, children } => {
                out.push('(');
                out.push_str(label);
                for c in children {
                    out.push(' ');
                    c.write_brackets(out);
                }
                out.push(')');
            }
            ParseTree::Leaf(t) => out.push_str(t),
        }
    }
}

/// Canonical bracketed form: single spaces, no wrapper.
impl fmt::Display for ParseTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write_brackets(&mut s);
        f.write_str(&s)
    }
}

pub fn serialize(tree: &ParseTree) -> String {
    tree.to_string()
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Atom(String),
}

/// Tokens paired with their 1-based character offset.
fn lex(line: &str) -> Vec<(usize, Tok)> {
    let mut out = Vec::new();
    let mut atom = String::new();
    let mut atom_start = 0;
    for (i, c) in line.chars().enumerate() {
        let pos = i + 1;
        if c == '(' || c == ')' || c.is_whitespace() {
            if !atom.is_empty() {
                out.push((atom_start, Tok::Atom(std::mem::take(&mut atom))));
            }
            match c {
                '(' => out.push((pos, Tok::Open)),
                ')' => out.push((pos, Tok::Close)),
                _ => {}
            }
        } else {
            if atom.is_empty() {
                atom_start = pos;
            }
            atom.push(c);
        }
    }
    if !atom.is_empty() {
        out.push((atom_start, Tok::Atom(atom)));
    }
    out
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end_offset: usize,
}

impl Parser {
    fn err<T>(&self, offset: usize, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            offset,
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<&(usize, Tok)> {
        self.toks.get(self.pos)
    }

    /// Parses a bracketed node; the opening paren has not been consumed.
    /// Returns `None` as the label for an unlabeled node.
    fn node(&mut self) -> Result<(Option<String>, Vec<ParseTree>, usize)> {
        let open_at = match self.peek() {
            Some((at, Tok::Open)) => *at,
            Some((at, _)) => return self.err(*at, "expected '('"),
            None => return self.err(self.end_offset, "unexpected end of input"),
        };
        self.pos += 1;
        let label = match self.peek() {
            Some((_, Tok::Atom(a))) => {
                let a = a.clone();
                self.pos += 1;
                Some(a)
            }
            Some((at, Tok::Close)) => return self.err(*at, "empty node"),
            Some((_, Tok::Open)) => None,
            None => return self.err(self.end_offset, "unexpected end of input"),
        };
        let mut children = Vec::new();
        loop {
            match self.peek() {
                Some((at, Tok::Close)) => {
                    let at = *at;
                    self.pos += 1;
                    if children.is_empty() {
                        return self.err(at, "node has no children");
                    }
                    return Ok((label, children, open_at));
                }
                Some((_, Tok::Atom(a))) => {
                    children.push(ParseTree::Leaf(a.clone()));
                    self.pos += 1;
                }
                Some((_, Tok::Open)) => {
                    let (l, c, at) = self.node()?;
                    match l {
                        Some(l) => children.push(ParseTree::Node {
                            label: l,
                            children: c,
                        }),
                        None => return self.err(at, "unlabeled node"),
                    }
                }
                None => return self.err(self.end_offset, "unexpected end of input"),
            }
        }
    }
}

/// Parses one bracketed sentence. A `ROOT` or unlabeled wrapper around a
/// single constituent is removed. Error offsets are 1-based character
/// positions; running out of input reports one past the last character.
pub fn parse_ptb(line: &str) -> Result<ParseTree> {
    let toks = lex(line);
    let end_offset = line.chars().count() + 1;
    if toks.is_empty() {
        return Err(Error::Parse {
            offset: 1,
            message: "empty input".into(),
        });
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end_offset,
    };
    let (label, mut children, open_at) = p.node()?;
    if let Some((at, _)) = p.peek() {
        return p.err(*at, "trailing input after tree");
    }
    let wrapper = label.as_deref().is_none_or(|l| l == "ROOT");
    if wrapper && children.len() == 1 && matches!(children[0], ParseTree::Node { .. }) {
        return Ok(children.pop().expect("one child"));
    }
    match label {
        Some(label) => Ok(ParseTree::Node { label, children }),
        None => p.err(open_at, "unlabeled node"),
    }
}

/// Reads a tree file: one bracketed sentence per line, `#` comment lines and
/// blank lines skipped.
pub fn parse_tree_text(contents: &str, source: &Path) -> Result<Vec<ParseTree>> {
    let mut trees = Vec::new();
    for (i, line) in contents.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            log::warn!("{}:{}: skipping empty line", source.display(), i + 1);
            continue;
        }
        if trimmed.starts_with('#') {
            continue;
        }
        let tree = parse_ptb(line).map_err(|e| Error::Located {
            path: source.to_owned(),
            line: i + 1,
            message: e.to_string(),
        })?;
        trees.push(tree);
    }
    Ok(trees)
}

pub fn read_tree_file(path: &Path) -> Result<Vec<ParseTree>> {
    parse_tree_text(&read_utf8(path)?, path)
}

/// Tree with word leaves removed; preterminals become childless nodes.
struct LabelTree<'a> {
    label: &'a str,
    children: Vec<LabelTree<'a>>,
}

impl<'a> LabelTree<'a> {
    fn from_parse(tree: &'a ParseTree) -> Option<Self> {
        match tree {
            ParseTree::Node { label, children } => Some(LabelTree {
                label,
                children: children.iter().filter_map(LabelTree::from_parse).collect(),
            }),
            ParseTree::Leaf(_) => None,
        }
    }

    fn encode(&self, depth: usize, out: &mut String) {
        if depth == 0 || self.children.is_empty() {
            out.push_str(self.label);
            return;
        }
        out.push('(');
        out.push_str(self.label);
        for c in &self.children {
            out.push(' ');
            c.encode(depth - 1, out);
        }
        out.push(')');
    }

    fn emit(&self, counts: &mut FeatureCounts) {
        if self.children.is_empty() {
            return;
        }
        let mut previous: Option<String> = None;
        for depth in 1..=MAX_PATTERN_DEPTH {
            let mut s = String::new();
            self.encode(depth, &mut s);
            if previous.as_deref() == Some(s.as_str()) {
                break;
            }
            *counts.entry(s.clone()).or_insert(0) += 1;
            previous = Some(s);
        }
        for c in &self.children {
            c.emit(counts);
        }
    }
}

/// Depth-1..3 subtree patterns of one tree, with multiplicity.
pub fn extract_subtrees(tree: &ParseTree) -> FeatureCounts {
    let mut counts = FeatureCounts::new();
    if let Some(lt) = LabelTree::from_parse(tree) {
        lt.emit(&mut counts);
    }
    counts
}

/// Patterns pooled over all sentences of a document.
pub fn document_patterns(trees: &[ParseTree]) -> FeatureCounts {
    let mut pooled = FeatureCounts::new();
    for t in trees {
        for (p, c) in extract_subtrees(t) {
            *pooled.entry(p).or_insert(0) += c;
        }
    }
    pooled
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrammarModel {
    inner: GradeModel,
}

/// Trains from in-memory documents (each a list of sentence trees).
pub fn train_grammar_trees(
    corpus: &[(Vec<ParseTree>, GradeLevel)],
    config: &SmoothingConfig,
) -> Result<GrammarModel> {
    if distinct_grades(corpus.iter().map(|(_, g)| g)).len() < 2 {
        return Err(Error::DegenerateCorpus(format!(
            "need at least 2 grades, found {}",
            distinct_grades(corpus.iter().map(|(_, g)| g)).len()
        )));
    }
    let mut entries = Vec::with_capacity(corpus.len());
    for (i, (trees, g)) in corpus.iter().enumerate() {
        let patterns = document_patterns(trees);
        if patterns.is_empty() {
            return Err(Error::InvalidEntry(format!(
                "document {} has no subtree patterns",
                i + 1
            )));
        }
        entries.push((*g, patterns));
    }
    Ok(GrammarModel {
        inner: GradeModel::train(FeatureKind::Subtree, &entries, config)?,
    })
}

/// Trains from tree files; parse errors carry file and line.
pub fn train_grammar(
    corpus: &[(PathBuf, GradeLevel)],
    config: &SmoothingConfig,
) -> Result<GrammarModel> {
    let mut docs = Vec::with_capacity(corpus.len());
    for (path, g) in corpus {
        let trees = read_tree_file(path)?;
        if document_patterns(&trees).is_empty() {
            return Err(Error::InvalidEntry(format!(
                "{}: no subtree patterns",
                path.display()
            )));
        }
        docs.push((trees, *g));
    }
    train_grammar_trees(&docs, config)
}

#[derive(Deserialize)]
struct JsonlTrees {
    grade: i64,
    path: PathBuf,
}

/// Lists a grammar corpus: a directory of `grade-NN` subdirectories holding
/// tree files, or a JSON-lines file of `{"grade": n, "path": "..."}` with
/// paths relative to the file's directory.
pub fn list_tree_corpus(path: &Path) -> Result<Vec<(PathBuf, GradeLevel)>> {
    if path.is_dir() {
        return Ok(read_grade_dirs(path)?
            .into_iter()
            .map(|(g, p)| (p, g))
            .collect());
    }
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let mut out = Vec::new();
    for (i, line) in read_utf8(path)?.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let located = |message: String| Error::Located {
            path: path.to_owned(),
            line: i + 1,
            message,
        };
        let rec: JsonlTrees = serde_json::from_str(line).map_err(|e| located(e.to_string()))?;
        let grade = GradeLevel::new(rec.grade).map_err(|e| located(e.to_string()))?;
        out.push((base.join(rec.path), grade));
    }
    Ok(out)
}

impl GrammarModel {
    pub fn model(&self) -> &GradeModel {
        &self.inner
    }

    pub fn posterior(&self, trees: &[ParseTree]) -> Result<BTreeMap<GradeLevel, f64>> {
        self.inner.posterior(&self.evidence_patterns(trees)?)
    }

    pub fn classify_map(&self, trees: &[ParseTree]) -> Result<GradeLevel> {
        self.inner.classify_map(&self.evidence_patterns(trees)?)
    }

    fn evidence_patterns(&self, trees: &[ParseTree]) -> Result<FeatureCounts> {
        let patterns = document_patterns(trees);
        if patterns.is_empty() {
            return Err(Error::EmptyEvidence);
        }
        Ok(patterns)
    }

    pub fn to_json(&self) -> Result<String> {
        self.inner.to_json()
    }

    pub fn from_json(json: &str) -> Result<Self> {
        Ok(GrammarModel {
            inner: GradeModel::from_json(json, FeatureKind::Subtree)?,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        self.inner.save(path)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(GrammarModel {
            inner: GradeModel::load(path, FeatureKind::Subtree)?,
        })
    }
}

/// Posterior-weighted grade over all sentences' patterns.
pub fn grammar_grade(model: &GrammarModel, trees: &[ParseTree]) -> Result<f64> {
    model.inner.expected_grade(&model.evidence_patterns(trees)?)
}
