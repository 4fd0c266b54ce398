#ifndef GRADELEVEL_H
#define GRADELEVEL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>

typedef enum GlStatus {
  GL_STATUS_OK = 0,
  GL_STATUS_NULL_POINTER = 1,
  GL_STATUS_INVALID_UTF8 = 2,
  GL_STATUS_IO = 3,
  GL_STATUS_PARSE = 4,
  GL_STATUS_MODEL_FORMAT = 5,
  GL_STATUS_EMPTY_DOCUMENT = 6,
  GL_STATUS_INVALID_ARGUMENT = 7,
  GL_STATUS_PANIC = 99,
} GlStatus;

/**
 * Opaque per-grade subtree model.
 */
typedef struct GlGrammarModel GlGrammarModel;

/**
 * Opaque per-grade word model.
 */
typedef struct GlLexicalModel GlLexicalModel;

/**
 * Counts and both formula values for one text.
 */
typedef struct GlFormulaReport {
  size_t words;
  size_t sentences;
  size_t syllables;
  size_t difficult_words;
  double flesch_kincaid;
  double dale_chall;
} GlFormulaReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *gl_version(void);

/**
 * Message for the last failed call on this thread, or "" after a success.
 * The pointer stays valid until the next `gl_` call on this thread.
 */
const char *gl_last_error_message(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library and not yet freed.
 */
void gl_string_free(char *s);

/**
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum GlStatus gl_lexical_model_load(const char *path, struct GlLexicalModel **out);

/**
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum GlStatus gl_lexical_model_from_json(const char *json, struct GlLexicalModel **out);

/**
 * Serializes the model; free the result with [`gl_string_free`].
 *
 * # Safety
 * `model` must be a live handle; `out` must be writable.
 */
enum GlStatus gl_lexical_model_to_json(const struct GlLexicalModel *model, char **out);

/**
 * # Safety
 * `model` must be NULL or a handle from this library, freed at most once.
 */
void gl_lexical_model_free(struct GlLexicalModel *model);

/**
 * Maximum a-posteriori grade (1-12) of `text`.
 *
 * # Safety
 * `model` must be a live handle, `text` NUL-terminated, `out_grade` writable.
 */
enum GlStatus gl_lexical_classify(const struct GlLexicalModel *model,
                                  const char *text,
                                  uint8_t *out_grade);

/**
 * Posterior-weighted grade of `text`.
 *
 * # Safety
 * `model` must be a live handle, `text` NUL-terminated, `out` writable.
 */
enum GlStatus gl_lexical_expected_grade(const struct GlLexicalModel *model,
                                        const char *text,
                                        double *out);

/**
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum GlStatus gl_grammar_model_load(const char *path, struct GlGrammarModel **out);

/**
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum GlStatus gl_grammar_model_from_json(const char *json, struct GlGrammarModel **out);

/**
 * # Safety
 * `model` must be NULL or a handle from this library, freed at most once.
 */
void gl_grammar_model_free(struct GlGrammarModel *model);

/**
 * Posterior-weighted grade of a document given as bracketed trees, one per
 * line.
 *
 * # Safety
 * `model` must be a live handle, `trees` NUL-terminated, `out` writable.
 */
enum GlStatus gl_grammar_grade(const struct GlGrammarModel *model, const char *trees, double *out);

/**
 * # Safety
 * `model` must be a live handle, `trees` NUL-terminated, `out_grade` writable.
 */
enum GlStatus gl_grammar_classify(const struct GlGrammarModel *model,
                                  const char *trees,
                                  uint8_t *out_grade);

/**
 * # Safety
 * `out` must be writable.
 */
enum GlStatus gl_flesch_kincaid(size_t words, size_t sentences, size_t syllables, double *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum GlStatus gl_dale_chall(size_t words, size_t sentences, size_t difficult_words, double *out);

/**
 * Tokenizes `text` and scores it with both formulas and the bundled
 * easy-word list.
 *
 * # Safety
 * `text` must be NUL-terminated; `out` must be writable.
 */
enum GlStatus gl_text_formulas(const char *text, struct GlFormulaReport *out);

/**
 * # Safety
 * `word` must be NUL-terminated; `out` must be writable.
 */
enum GlStatus gl_count_syllables(const char *word, uint32_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GRADELEVEL_H */
