use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use gradelevel_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(gl_last_error_message()) }
        .to_str()
        .unwrap()
        .to_owned()
}

const LEXICAL_JSON: &str = r#"{"format_version":1,"feature_kind":"word","tie_break":"lowest_grade",
"binary_features":false,"smoothing":{"lambda":0.9,"oov_mass":0.0001,"unseen_types":40.0},
"grades":[2,9],"priors":{"2":0.5,"9":0.5},"documents":{"2":1,"9":1},"totals":{"2":2,"9":2},
"counts":{"2":{"cat":1,"dog":1},"9":{"policy":1,"reform":1}}}"#;

const GRAMMAR_JSON: &str = r#"{"format_version":1,"feature_kind":"subtree","tie_break":"lowest_grade",
"binary_features":false,"smoothing":{"lambda":0.9,"oov_mass":0.0001,"unseen_types":20.0},
"grades":[3,7],"priors":{"3":0.5,"7":0.5},"documents":{"3":1,"7":1},"totals":{"3":1,"7":1},
"counts":{"3":{"(S NP VP)":1},"7":{"(S SBAR NP VP)":1}}}"#;

#[test]
fn formulas() {
    let mut v = 0.0;
    assert_eq!(
        unsafe { gl_flesch_kincaid(10, 1, 15, &mut v) },
        GlStatus::Ok
    );
    assert!((v - 6.01).abs() < 1e-9);
    assert_eq!(last_error(), "");
    assert_eq!(unsafe { gl_dale_chall(100, 10, 5, &mut v) }, GlStatus::Ok);
    assert!((v - 1.2855).abs() < 1e-9);
    assert_eq!(
        unsafe { gl_dale_chall(10, 0, 1, &mut v) },
        GlStatus::EmptyDocument
    );
    assert_eq!(last_error(), "empty document");
    assert_eq!(
        unsafe { gl_flesch_kincaid(10, 1, 5, &mut v) },
        GlStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { gl_flesch_kincaid(10, 1, 15, ptr::null_mut()) },
        GlStatus::NullPointer
    );
    assert!(last_error().contains("out"));
}

#[test]
fn text_formulas_and_syllables() {
    let mut r = GlFormulaReport::default();
    let text = c("We saw a big dog, happy little yellow garden window.");
    assert_eq!(
        unsafe { gl_text_formulas(text.as_ptr(), &mut r) },
        GlStatus::Ok
    );
    assert_eq!(
        (r.words, r.sentences, r.syllables, r.difficult_words),
        (10, 1, 15, 0)
    );
    assert!((r.dale_chall - 0.496).abs() < 1e-9);
    assert_eq!(
        unsafe { gl_text_formulas(c("  ").as_ptr(), &mut r) },
        GlStatus::EmptyDocument
    );

    let mut n = 0u32;
    assert_eq!(
        unsafe { gl_count_syllables(c("table").as_ptr(), &mut n) },
        GlStatus::Ok
    );
    assert_eq!(n, 2);
    assert_eq!(
        unsafe { gl_count_syllables(c("---").as_ptr(), &mut n) },
        GlStatus::InvalidArgument
    );
    let bad = [0xffu8, 0xfe, 0];
    assert_eq!(
        unsafe { gl_count_syllables(bad.as_ptr().cast(), &mut n) },
        GlStatus::InvalidUtf8
    );
}

#[test]
fn lexical_handle_lifecycle() {
    let mut model = ptr::null_mut();
    let json = c(LEXICAL_JSON);
    assert_eq!(
        unsafe { gl_lexical_model_from_json(json.as_ptr(), &mut model) },
        GlStatus::Ok
    );
    assert!(!model.is_null());

    let mut grade = 0u8;
    assert_eq!(
        unsafe { gl_lexical_classify(model, c("The cat, the dog.").as_ptr(), &mut grade) },
        GlStatus::Ok
    );
    assert_eq!(grade, 2);
    let mut e = 0.0;
    assert_eq!(
        unsafe { gl_lexical_expected_grade(model, c("policy reform").as_ptr(), &mut e) },
        GlStatus::Ok
    );
    assert!(e > 8.0 && e <= 9.0);
    assert_eq!(
        unsafe { gl_lexical_classify(model, c("").as_ptr(), &mut grade) },
        GlStatus::EmptyDocument
    );

    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { gl_lexical_model_to_json(model, &mut out) },
        GlStatus::Ok
    );
    let round = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_owned();
    unsafe { gl_string_free(out) };
    let mut again = ptr::null_mut();
    let round_c = c(&round);
    assert_eq!(
        unsafe { gl_lexical_model_from_json(round_c.as_ptr(), &mut again) },
        GlStatus::Ok
    );

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    std::fs::write(&path, &round).unwrap();
    let mut loaded = ptr::null_mut();
    let p = c(path.to_str().unwrap());
    assert_eq!(
        unsafe { gl_lexical_model_load(p.as_ptr(), &mut loaded) },
        GlStatus::Ok
    );
    let missing = c(dir.path().join("none.json").to_str().unwrap());
    let mut none = ptr::null_mut();
    assert_eq!(
        unsafe { gl_lexical_model_load(missing.as_ptr(), &mut none) },
        GlStatus::Io
    );
    assert!(none.is_null());

    unsafe {
        gl_lexical_model_free(model);
        gl_lexical_model_free(again);
        gl_lexical_model_free(loaded);
        gl_lexical_model_free(ptr::null_mut());
        gl_string_free(ptr::null_mut());
    }
}

#[test]
fn model_kind_and_format_errors() {
    let mut lex = ptr::null_mut();
    let grammar = c(GRAMMAR_JSON);
    assert_eq!(
        unsafe { gl_lexical_model_from_json(grammar.as_ptr(), &mut lex) },
        GlStatus::ModelFormat
    );
    assert!(lex.is_null());
    assert!(last_error().contains("model format"));
    assert_eq!(
        unsafe { gl_lexical_model_from_json(c("{").as_ptr(), &mut lex) },
        GlStatus::ModelFormat
    );
    assert_eq!(
        unsafe { gl_lexical_model_from_json(ptr::null(), &mut lex) },
        GlStatus::NullPointer
    );
    let mut grade = 0u8;
    assert_eq!(
        unsafe { gl_lexical_classify(ptr::null(), c("x").as_ptr(), &mut grade) },
        GlStatus::NullPointer
    );
}

#[test]
fn grammar_handle() {
    let mut model = ptr::null_mut();
    let json = c(GRAMMAR_JSON);
    assert_eq!(
        unsafe { gl_grammar_model_from_json(json.as_ptr(), &mut model) },
        GlStatus::Ok
    );

    let simple = c("(S (NP (PRP we)) (VP (VBD won)))\n");
    let mut grade = 0u8;
    assert_eq!(
        unsafe { gl_grammar_classify(model, simple.as_ptr(), &mut grade) },
        GlStatus::Ok
    );
    assert_eq!(grade, 3);
    let mut g = 0.0;
    assert_eq!(
        unsafe { gl_grammar_grade(model, simple.as_ptr(), &mut g) },
        GlStatus::Ok
    );
    assert!((g - 3.2).abs() < 1e-9, "{g}");

    // all features unseen: posterior stays at the uniform prior
    let unseen = c("(FRAG (X (Y z)))");
    assert_eq!(
        unsafe { gl_grammar_grade(model, unseen.as_ptr(), &mut g) },
        GlStatus::Ok
    );
    assert!((g - 5.0).abs() < 1e-12);

    let broken = c("(S (NP (PRP we))");
    assert_eq!(
        unsafe { gl_grammar_grade(model, broken.as_ptr(), &mut g) },
        GlStatus::Parse
    );
    assert!(last_error().contains("offset"), "{}", last_error());
    assert_eq!(
        unsafe { gl_grammar_grade(model, c("").as_ptr(), &mut g) },
        GlStatus::EmptyDocument
    );

    unsafe { gl_grammar_model_free(model) };
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(gl_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

fn target_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_owned()
}

#[test]
fn header_is_current() {
    let header = std::fs::read_to_string(
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/gradelevel.h"),
    )
    .unwrap();
    for name in [
        "gl_lexical_model_load",
        "gl_lexical_model_free",
        "gl_grammar_grade",
        "gl_text_formulas",
        "gl_last_error_message",
        "GL_STATUS_PARSE",
        "typedef struct GlLexicalModel GlLexicalModel;",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}

/// Compiles and runs a C program against the generated header and the
/// static library, when a C compiler is available.
#[test]
fn c_program_links_and_runs() {
    let lib = target_dir().join("libgradelevel_ffi.a");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() || !lib.exists() {
        eprintln!("skipping: no C compiler or static library");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let status = Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
