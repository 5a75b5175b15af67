#ifndef TWEETCAST_H
#define TWEETCAST_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TcStatus {
  TC_STATUS_OK = 0,
  TC_STATUS_NULL_POINTER = 1,
  TC_STATUS_INVALID_UTF8 = 2,
  TC_STATUS_INVALID_ARGUMENT = 3,
  TC_STATUS_IO = 4,
  TC_STATUS_DATA = 5,
  TC_STATUS_OUT_OF_RANGE = 6,
  TC_STATUS_PANIC = 7,
} TcStatus;

typedef enum TcWinner {
  TC_WINNER_TIE = 0,
  TC_WINNER_FIRST = 1,
  TC_WINNER_SECOND = 2,
} TcWinner;

typedef enum TcModel {
  TC_MODEL_BASELINE = 0,
  TC_MODEL_MODEL1 = 1,
  TC_MODEL_MODEL2 = 2,
} TcModel;

typedef enum TcWeightMode {
  TC_WEIGHT_MODE_NORMALIZED = 0,
  TC_WEIGHT_MODE_LITERAL = 1,
} TcWeightMode;

typedef struct TcForecast TcForecast;

typedef struct TcLexicon TcLexicon;

typedef struct TcStateTable TcStateTable;

typedef struct TcScore {
  uint64_t positive;
  uint64_t negative;
  int64_t net;
  uint64_t matched_tokens;
} TcScore;

typedef struct TcStateShare {
  double share_1;
  double share_2;
  double margin;
  enum TcWinner winner;
  uint32_t electoral_votes;
} TcStateShare;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next call into the library on the same thread.
 */
const char *tc_last_error(void);

/**
 * Library version, static storage.
 */
const char *tc_version(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed once.
 */
void tc_string_free(char *s);

/**
 * Bundled AFINN-111 lexicon.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum TcStatus tc_lexicon_afinn111(struct TcLexicon **out);

/**
 * Loads a tab-separated `term<TAB>valence` file.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum TcStatus tc_lexicon_load(const char *path, struct TcLexicon **out);

/**
 * # Safety
 * `lex` must be null or a live handle.
 */
size_t tc_lexicon_len(const struct TcLexicon *lex);

/**
 * Unigram score of `text`.
 *
 * # Safety
 * `lex` must be a live handle, `text` NUL-terminated, `out` valid.
 */
enum TcStatus tc_lexicon_score(const struct TcLexicon *lex, const char *text, struct TcScore *out);

/**
 * # Safety
 * `lex` must be null or a live handle, freed once.
 */
void tc_lexicon_free(struct TcLexicon *lex);

/**
 * Joins and validates the per-state inputs. `weights` may be null for equal
 * turnout weights.
 *
 * # Safety
 * Paths must be NUL-terminated (or null for `weights`); `out` valid.
 */
enum TcStatus tc_state_table_load(const char *census,
                                  const char *priors,
                                  const char *apportionment,
                                  const char *weights,
                                  struct TcStateTable **out);

/**
 * # Safety
 * `table` must be null or a live handle.
 */
size_t tc_state_table_len(const struct TcStateTable *table);

/**
 * # Safety
 * `table` must be null or a live handle, freed once.
 */
void tc_state_table_free(struct TcStateTable *table);

/**
 * Forecast with twitter support `(e1, 1 - e1)`, Obama/Democrat first.
 * `model` is a [`TcModel`] value and `mode` a [`TcWeightMode`] value.
 *
 * # Safety
 * `table` must be a live handle and `out` valid.
 */
enum TcStatus tc_forecast_run(const struct TcStateTable *table,
                              double e1,
                              uint32_t model,
                              uint32_t mode,
                              struct TcForecast **out);

/**
 * Prior-only forecast.
 *
 * # Safety
 * `table` must be a live handle and `out` valid.
 */
enum TcStatus tc_forecast_baseline(const struct TcStateTable *table, struct TcForecast **out);

/**
 * Writes the popular vote pair to `out[0..2]`.
 *
 * # Safety
 * `f` must be a live handle; `out` must point to two doubles.
 */
enum TcStatus tc_forecast_popular_vote(const struct TcForecast *f, double *out);

/**
 * Electoral votes per candidate into `out[0..2]`; `tied` and `total` may be null.
 *
 * # Safety
 * `f` must be a live handle; `out` must point to two integers.
 */
enum TcStatus tc_forecast_electoral_votes(const struct TcForecast *f,
                                          uint64_t *out,
                                          uint64_t *tied,
                                          uint64_t *total);

/**
 * # Safety
 * `f` must be null or a live handle.
 */
size_t tc_forecast_state_count(const struct TcForecast *f);

/**
 * # Safety
 * `f` must be a live handle and `out` valid.
 */
enum TcStatus tc_forecast_state(const struct TcForecast *f, size_t index, struct TcStateShare *out);

/**
 * State name at `index`, owned by the forecast; null when out of range.
 *
 * # Safety
 * `f` must be null or a live handle.
 */
const char *tc_forecast_state_name(const struct TcForecast *f, size_t index);

/**
 * Full forecast as JSON; free with `tc_string_free`.
 *
 * # Safety
 * `f` must be a live handle and `out` valid.
 */
enum TcStatus tc_forecast_to_json(const struct TcForecast *f, char **out);

/**
 * # Safety
 * `f` must be null or a live handle, freed once.
 */
void tc_forecast_free(struct TcForecast *f);

/**
 * `a / (a + b)` into `out`.
 *
 * # Safety
 * `out` must be valid.
 */
enum TcStatus tc_two_party_share(double a, double b, double *out);

/**
 * Mean of `len` values.
 *
 * # Safety
 * `values` must point to `len` doubles; `out` valid.
 */
enum TcStatus tc_mae(const double *values, size_t len, double *out);

/**
 * Twitter support from per-candidate signal totals, optionally add-one
 * smoothed, into `out[0..2]`.
 *
 * # Safety
 * `out` must point to two doubles.
 */
enum TcStatus tc_support_from_counts(uint64_t x1, uint64_t x2, bool smoothing, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TWEETCAST_H */
