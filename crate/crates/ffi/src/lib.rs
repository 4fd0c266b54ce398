//! C ABI over `gradelevel`.
//!
//! Every fallible function returns a [`GlStatus`] and writes its result
//! through an out-pointer. On failure a description is available from
//! [`gl_last_error_message`] on the same thread until the next call.
//! Models are opaque handles released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use gradelevel::formulas::{dale_chall, flesch_kincaid, score_document, EasyWordList};
use gradelevel::grammar::{grammar_grade, parse_tree_text, GrammarModel};
use gradelevel::lexical::LexicalModel;
use gradelevel::text::{count_syllables, Tokenizer};
use gradelevel::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Io = 3,
    Parse = 4,
    ModelFormat = 5,
    EmptyDocument = 6,
    InvalidArgument = 7,
    Panic = 99,
}

/// Counts and both formula values for one text.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GlFormulaReport {
    pub words: usize,
    pub sentences: usize,
    pub syllables: usize,
    pub difficult_words: usize,
    pub flesch_kincaid: f64,
    pub dale_chall: f64,
}

/// Opaque per-grade word model.
pub struct GlLexicalModel {
    inner: LexicalModel,
}

/// Opaque per-grade subtree model.
pub struct GlGrammarModel {
    inner: GrammarModel,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(GlStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Encoding(_) => GlStatus::InvalidUtf8,
            Error::Io { .. } => GlStatus::Io,
            Error::Parse { .. } | Error::Located { .. } => GlStatus::Parse,
            Error::ModelFormat(_) | Error::Json(_) => GlStatus::ModelFormat,
            Error::EmptyDocument | Error::EmptyEvidence => GlStatus::EmptyDocument,
            _ => GlStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> GlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            GlStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            GlStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(GlStatus::NullPointer, format!("{name} is NULL")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(GlStatus::InvalidUtf8, format!("{name}: {e}")))
}

unsafe fn out_arg<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or_else(|| Failure(GlStatus::NullPointer, format!("{name} is NULL")))
}

unsafe fn handle<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure(GlStatus::NullPointer, format!("{name} is NULL")))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn gl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or "" after a success.
/// The pointer stays valid until the next `gl_` call on this thread.
#[no_mangle]
pub extern "C" fn gl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gl_lexical_model_load(
    path: *const c_char,
    out: *mut *mut GlLexicalModel,
) -> GlStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        let out = out_arg(out, "out")?;
        let inner = LexicalModel::load(Path::new(path))?;
        *out = Box::into_raw(Box::new(GlLexicalModel { inner }));
        Ok(())
    })
}

/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gl_lexical_model_from_json(
    json: *const c_char,
    out: *mut *mut GlLexicalModel,
) -> GlStatus {
    guard(|| {
        let json = str_arg(json, "json")?;
        let out = out_arg(out, "out")?;
        let inner = LexicalModel::from_json(json)?;
        *out = Box::into_raw(Box::new(GlLexicalModel { inner }));
        Ok(())
    })
}

/// Serializes the model; free the result with [`gl_string_free`].
///
/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gl_lexical_model_to_json(
    model: *const GlLexicalModel,
    out: *mut *mut c_char,
) -> GlStatus {
    guard(|| {
        let model = handle(model, "model")?;
        let out = out_arg(out, "out")?;
        let json = model.inner.to_json()?;
        *out = CString::new(json)
            .map_err(|e| Failure(GlStatus::ModelFormat, e.to_string()))?
            .into_raw();
        Ok(())
    })
}

/// # Safety
/// `model` must be NULL or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn gl_lexical_model_free(model: *mut GlLexicalModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Maximum a-posteriori grade (1-12) of `text`.
///
/// # Safety
/// `model` must be a live handle, `text` NUL-terminated, `out_grade` writable.
#[no_mangle]
pub unsafe extern "C" fn gl_lexical_classify(
    model: *const GlLexicalModel,
    text: *const c_char,
    out_grade: *mut u8,
) -> GlStatus {
    guard(|| {
        let model = handle(model, "model")?;
        let doc = Tokenizer::default().tokenize_str(str_arg(text, "text")?);
        let out = out_arg(out_grade, "out_grade")?;
        *out = model.inner.classify_map(&doc)?.value();
        Ok(())
    })
}

/// Posterior-weighted grade of `text`.
///
/// # Safety
/// `model` must be a live handle, `text` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gl_lexical_expected_grade(
    model: *const GlLexicalModel,
    text: *const c_char,
    out: *mut f64,
) -> GlStatus {
    guard(|| {
        let model = handle(model, "model")?;
        let doc = Tokenizer::default().tokenize_str(str_arg(text, "text")?);
        let out = out_arg(out, "out")?;
        *out = model.inner.expected_grade(&doc)?;
        Ok(())
    })
}

/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gl_grammar_model_load(
    path: *const c_char,
    out: *mut *mut GlGrammarModel,
) -> GlStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        let out = out_arg(out, "out")?;
        let inner = GrammarModel::load(Path::new(path))?;
        *out = Box::into_raw(Box::new(GlGrammarModel { inner }));
        Ok(())
    })
}

/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gl_grammar_model_from_json(
    json: *const c_char,
    out: *mut *mut GlGrammarModel,
) -> GlStatus {
    guard(|| {
        let json = str_arg(json, "json")?;
        let out = out_arg(out, "out")?;
        let inner = GrammarModel::from_json(json)?;
        *out = Box::into_raw(Box::new(GlGrammarModel { inner }));
        Ok(())
    })
}

/// # Safety
/// `model` must be NULL or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn gl_grammar_model_free(model: *mut GlGrammarModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

unsafe fn trees_arg(trees: *const c_char) -> Result<Vec<gradelevel::ParseTree>, Failure> {
    Ok(parse_tree_text(
        str_arg(trees, "trees")?,
        Path::new("<trees>"),
    )?)
}

/// Posterior-weighted grade of a document given as bracketed trees, one per
/// line.
///
/// # Safety
/// `model` must be a live handle, `trees` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gl_grammar_grade(
    model: *const GlGrammarModel,
    trees: *const c_char,
    out: *mut f64,
) -> GlStatus {
    guard(|| {
        let model = handle(model, "model")?;
        let trees = trees_arg(trees)?;
        let out = out_arg(out, "out")?;
        *out = grammar_grade(&model.inner, &trees)?;
        Ok(())
    })
}

/// # Safety
/// `model` must be a live handle, `trees` NUL-terminated, `out_grade` writable.
#[no_mangle]
pub unsafe extern "C" fn gl_grammar_classify(
    model: *const GlGrammarModel,
    trees: *const c_char,
    out_grade: *mut u8,
) -> GlStatus {
    guard(|| {
        let model = handle(model, "model")?;
        let trees = trees_arg(trees)?;
        let out = out_arg(out_grade, "out_grade")?;
        *out = model.inner.classify_map(&trees)?.value();
        Ok(())
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gl_flesch_kincaid(
    words: usize,
    sentences: usize,
    syllables: usize,
    out: *mut f64,
) -> GlStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = flesch_kincaid(words, sentences, syllables)?.value;
        Ok(())
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gl_dale_chall(
    words: usize,
    sentences: usize,
    difficult_words: usize,
    out: *mut f64,
) -> GlStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = dale_chall(words, sentences, difficult_words)?.value;
        Ok(())
    })
}

/// Tokenizes `text` and scores it with both formulas and the bundled
/// easy-word list.
///
/// # Safety
/// `text` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gl_text_formulas(
    text: *const c_char,
    out: *mut GlFormulaReport,
) -> GlStatus {
    guard(|| {
        let doc = Tokenizer::default().tokenize_str(str_arg(text, "text")?);
        let out = out_arg(out, "out")?;
        let r = score_document(&doc, &EasyWordList::bundled())?;
        *out = GlFormulaReport {
            words: r.words,
            sentences: r.sentences,
            syllables: r.syllables,
            difficult_words: r.difficult_words,
            flesch_kincaid: r.flesch_kincaid,
            dale_chall: r.dale_chall,
        };
        Ok(())
    })
}

/// # Safety
/// `word` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gl_count_syllables(word: *const c_char, out: *mut u32) -> GlStatus {
    guard(|| {
        let word = str_arg(word, "word")?;
        let out = out_arg(out, "out")?;
        *out = count_syllables(word)?;
        Ok(())
    })
}
