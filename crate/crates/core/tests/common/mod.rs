#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;

use gradelevel::grammar::ParseTree;
use gradelevel::model::{FeatureCounts, GradeLevel, GradeModel, PriorMode, SmoothingConfig};

pub fn fixture_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/appendix_scores.csv")
}

pub fn g(v: u8) -> GradeLevel {
    GradeLevel::new(i64::from(v)).unwrap()
}

fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Smoothing settings with exact rational values; the model under test
/// receives their nearest doubles.
#[derive(Debug, Clone)]
pub struct ExactSmoothing {
    pub lambda: (i64, i64),
    pub oov: (i64, i64),
    pub unseen_types: Option<i64>,
    pub proportional: bool,
    pub binary: bool,
}

impl ExactSmoothing {
    pub fn config(&self) -> SmoothingConfig {
        SmoothingConfig {
            lambda: self.lambda.0 as f64 / self.lambda.1 as f64,
            oov_mass: self.oov.0 as f64 / self.oov.1 as f64,
            unseen_types: self.unseen_types.map(|u| u as f64),
            priors: if self.proportional {
                PriorMode::Proportional
            } else {
                PriorMode::Uniform
            },
            binary_features: self.binary,
        }
    }
}

pub fn smoothing_strategy() -> impl Strategy<Value = ExactSmoothing> {
    (
        prop::sample::select(vec![(1i64, 2i64), (3, 4), (9, 10), (1, 1)]),
        prop::sample::select(vec![(1i64, 100i64), (1, 1000), (1, 10000)]),
        prop::option::of(1i64..=50),
        any::<bool>(),
        any::<bool>(),
    )
        .prop_map(
            |(lambda, oov, unseen_types, proportional, binary)| ExactSmoothing {
                lambda,
                oov,
                unseen_types,
                proportional,
                binary,
            },
        )
}

fn presence(doc: &FeatureCounts) -> FeatureCounts {
    doc.iter()
        .filter(|(_, &c)| c > 0)
        .map(|(k, _)| (k.clone(), 1))
        .collect()
}

/// What exhaustive Bayes arithmetic over exact rationals says about one
/// test document.
#[derive(Debug, Clone)]
pub struct OracleResult {
    pub map: GradeLevel,
    pub posterior: BTreeMap<GradeLevel, f64>,
    pub expected: f64,
}

/// Exact posterior for `doc` under the interpolated, OOV-reserving grade
/// model trained on `train`. Computes prior times product of smoothed
/// probabilities for every grade, normalizes, and picks the lowest grade
/// among exact maxima.
pub fn bayes_oracle(
    train: &[(GradeLevel, FeatureCounts)],
    doc: &FeatureCounts,
    s: &ExactSmoothing,
) -> OracleResult {
    let mut counts: BTreeMap<GradeLevel, FeatureCounts> = BTreeMap::new();
    let mut docs: BTreeMap<GradeLevel, i64> = BTreeMap::new();
    for (grade, d) in train {
        let d = if s.binary { presence(d) } else { d.clone() };
        *docs.entry(*grade).or_default() += 1;
        let c = counts.entry(*grade).or_default();
        for (f, n) in d {
            *c.entry(f).or_default() += n;
        }
    }
    let mut pooled: FeatureCounts = BTreeMap::new();
    for c in counts.values() {
        for (f, n) in c {
            *pooled.entry(f.clone()).or_default() += n;
        }
    }
    let pooled_total: u64 = pooled.values().sum();
    let unseen_types = s.unseen_types.unwrap_or(10 * pooled.len() as i64);
    let lambda = rat(s.lambda.0, s.lambda.1);
    let oov = rat(s.oov.0, s.oov.1);
    let one = BigRational::one();
    let unseen_p = &oov / BigRational::from_integer(BigInt::from(unseen_types));
    let n_docs: i64 = docs.values().sum();
    let n_grades = counts.len() as i64;

    let doc = if s.binary { presence(doc) } else { doc.clone() };
    let mut joint: BTreeMap<GradeLevel, BigRational> = BTreeMap::new();
    for (grade, c) in &counts {
        let total: u64 = c.values().sum();
        let prior = if s.proportional {
            rat(docs[grade], n_docs)
        } else {
            rat(1, n_grades)
        };
        let mut acc = prior;
        for (f, &n) in &doc {
            if n == 0 {
                continue;
            }
            let p = match pooled.get(f) {
                None => unseen_p.clone(),
                Some(&pc) => {
                    let in_grade = rat(*c.get(f).unwrap_or(&0) as i64, total as i64);
                    let bg = rat(pc as i64, pooled_total as i64);
                    (&one - &oov) * (&lambda * in_grade + (&one - &lambda) * bg)
                }
            };
            for _ in 0..n {
                acc = &acc * &p;
            }
        }
        joint.insert(*grade, acc);
    }

    // Every grade impossible (only reachable with lambda = 1): the posterior
    // is the prior.
    if joint.values().all(Zero::is_zero) {
        for (grade, v) in joint.iter_mut() {
            *v = if s.proportional {
                rat(docs[grade], n_docs)
            } else {
                rat(1, n_grades)
            };
        }
    }
    let best = joint.values().max().unwrap().clone();
    let map = *joint.iter().find(|(_, v)| **v == best).unwrap().0;
    let z: BigRational = joint.values().fold(BigRational::zero(), |a, b| a + b);
    let posterior: BTreeMap<GradeLevel, f64> = joint
        .iter()
        .map(|(g, v)| (*g, (v / &z).to_f64().unwrap()))
        .collect();
    let expected_exact = joint.iter().fold(BigRational::zero(), |a, (g, v)| {
        a + BigRational::from_integer(BigInt::from(g.value())) * v
    }) / &z;
    OracleResult {
        map,
        posterior,
        expected: expected_exact.to_f64().unwrap(),
    }
}

/// A small training corpus plus one held-out document, over at most 10
/// feature types.
#[derive(Debug, Clone)]
pub struct ToyInstance {
    pub train: Vec<(GradeLevel, Vec<String>)>,
    pub doc: Vec<String>,
    pub smoothing: ExactSmoothing,
}

fn grades_strategy() -> impl Strategy<Value = Vec<u8>> {
    prop::sample::subsequence((1u8..=12).collect::<Vec<_>>(), 2..=3)
}

/// Lexical toy: words `w0`..`w9`, test documents may contain unseen `zz*`.
pub fn lexical_instance() -> impl Strategy<Value = ToyInstance> {
    let word = (0usize..10).prop_map(|i| format!("w{i}"));
    let test_word = prop_oneof![
        4 => (0usize..10).prop_map(|i| format!("w{i}")),
        1 => (0usize..3).prop_map(|i| format!("zz{i}")),
    ];
    (
        grades_strategy(),
        prop::collection::vec(prop::collection::vec(word, 1..=5), 2..=9),
        prop::collection::vec(test_word, 1..=5),
        smoothing_strategy(),
    )
        .prop_map(|(grades, docs, doc, smoothing)| ToyInstance {
            train: assign_grades(&grades, docs),
            doc,
            smoothing,
        })
}

/// Spreads documents round-robin so that every chosen grade gets one.
fn assign_grades(grades: &[u8], docs: Vec<Vec<String>>) -> Vec<(GradeLevel, Vec<String>)> {
    docs.into_iter()
        .enumerate()
        .map(|(i, d)| (g(grades[i % grades.len()]), d))
        .collect()
}

/// Child-label sequences under an `S` root; one subtree pattern each.
pub const SHAPES: [&[&str]; 10] = [
    &["NP"],
    &["VP"],
    &["NP", "VP"],
    &["VP", "NP"],
    &["NP", "NP"],
    &["VP", "VP"],
    &["NP", "VP", "NP"],
    &["NP", "NP", "VP"],
    &["VP", "NP", "VP"],
    &["NP", "VP", "VP"],
];

pub fn shape_tree(root: &str, shape: &[&str], word: &str) -> ParseTree {
    ParseTree::node(
        root,
        shape
            .iter()
            .map(|l| ParseTree::node(*l, vec![ParseTree::leaf(word)]))
            .collect(),
    )
}

/// Grammar toy: a document is 1 to 5 sentence trees drawn from `SHAPES`.
/// Encoded as `root:shape` strings; see [`toy_trees`].
pub fn grammar_instance() -> impl Strategy<Value = ToyInstance> {
    let sentence = (0usize..10).prop_map(|i| format!("S:{i}"));
    let test_sentence = prop_oneof![
        4 => (0usize..10).prop_map(|i| format!("S:{i}")),
        1 => (0usize..3).prop_map(|i| format!("SQ:{i}")),
    ];
    (
        grades_strategy(),
        prop::collection::vec(prop::collection::vec(sentence, 1..=5), 2..=9),
        prop::collection::vec(test_sentence, 1..=5),
        smoothing_strategy(),
    )
        .prop_map(|(grades, docs, doc, smoothing)| ToyInstance {
            train: assign_grades(&grades, docs),
            doc,
            smoothing,
        })
}

pub fn toy_trees(doc: &[String]) -> Vec<ParseTree> {
    doc.iter()
        .enumerate()
        .map(|(i, s)| {
            let (root, idx) = s.split_once(':').unwrap();
            shape_tree(
                root,
                SHAPES[idx.parse::<usize>().unwrap()],
                &format!("x{i}"),
            )
        })
        .collect()
}

pub fn counts_of<S: AsRef<str>>(items: &[S]) -> FeatureCounts {
    let mut m = FeatureCounts::new();
    for s in items {
        *m.entry(s.as_ref().to_owned()).or_default() += 1;
    }
    m
}

/// Largest deviation of any grade's total smoothed mass from 1.
pub fn normalization_error(model: &GradeModel) -> f64 {
    model
        .grades()
        .into_iter()
        .map(|g| (model.normalization_mass(g) - 1.0).abs())
        .fold(0.0, f64::max)
}

/// Random bracketed tree over a small label set, with words at the leaves.
pub fn arb_tree() -> impl Strategy<Value = ParseTree> {
    let labels = prop::sample::select(vec!["NP", "VP", "PP", "ADJP", "SBAR", "S"]);
    let tags = prop::sample::select(vec!["DT", "NN", "VBD", "JJ", "IN", "PRP"]);
    let word = "[a-z]{1,6}";
    let pre = (tags, word).prop_map(|(t, w)| ParseTree::node(t, vec![ParseTree::leaf(w)]));
    let inner = pre.prop_recursive(4, 24, 3, move |child| {
        (labels.clone(), prop::collection::vec(child, 1..=3))
            .prop_map(|(l, kids)| ParseTree::node(l, kids))
    });
    prop::collection::vec(inner, 1..=3).prop_map(|kids| ParseTree::node("S", kids))
}
