#ifndef STOPSAT_H
#define STOPSAT_H

/* This file is generated by cbindgen from stopsat-ffi; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Satisfaction model selector for the scoring calls.
typedef enum StopsatSatisfaction {
  // Precision at the stopping rank.
  STOPSAT_SATISFACTION_PRECISION = 0,
  // Binary gain of the stopped-at document (1 at or above the ranking's
  // binarization threshold, 0 below).
  STOPSAT_SATISFACTION_GAIN_BINARY = 1,
  // 1 once the first relevant document has been passed, else 0.
  STOPSAT_SATISFACTION_NAVIGATIONAL = 2,
} StopsatSatisfaction;

// Result of a C-ABI call.
typedef enum StopsatStatus {
  // The call succeeded and out-parameters are valid.
  STOPSAT_STATUS_OK = 0,
  // A required pointer argument was null.
  STOPSAT_STATUS_NULL_ARGUMENT = 1,
  // An argument was outside its allowed range; see the last error message.
  STOPSAT_STATUS_INVALID_ARGUMENT = 2,
  // The metric is undefined for this ranking (no relevant documents).
  STOPSAT_STATUS_UNDEFINED_METRIC = 3,
  // A string argument was not valid UTF-8.
  STOPSAT_STATUS_INVALID_UTF8 = 4,
} StopsatStatus;

// Opaque handle to a judged ranking.
typedef struct StopsatRanking StopsatRanking;

// Parameters of the willingness/expectation stopping model.
typedef struct StopsatWeParams {
  // Scale of the hazard, in (0, 1].
  double base_hazard;
  // Smoothing rate for the expectation update, in (0, 1].
  double expectation_smoothing;
  // Initial expectation, in [0, 1].
  double expectation_prior;
  // Exponent on the spent-willingness term, >= 0.
  double willingness_exponent;
  // Exponent on the disappointed-expectation term, >= 0.
  double expectation_exponent;
} StopsatWeParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Creates a ranking handle from grades ordered by rank.
//
// `grades` may be null only when `grades_len` is zero. `total_relevant`
// counts the relevant documents in the whole judgment pool and must be at
// least the number of relevant documents among `grades`; grades at or above
// `binarization_threshold` (>= 1) count as relevant.
//
// # Safety
//
// `topic_id` must point to a NUL-terminated string, `grades` to
// `grades_len` readable `uint32_t`s, and `out_ranking` to a writable slot.
enum StopsatStatus stopsat_ranking_new(const char *topic_id,
                                       const uint32_t *grades,
                                       size_t grades_len,
                                       size_t total_relevant,
                                       uint32_t binarization_threshold,
                                       struct StopsatRanking **out_ranking);

// Releases a ranking handle. A null pointer is ignored.
//
// # Safety
//
// `ranking` must be null or a pointer returned by [`stopsat_ranking_new`]
// that has not been freed yet.
void stopsat_ranking_free(struct StopsatRanking *ranking);

// Scores a ranking under the average-precision stopping model.
//
// With `STOPSAT_SATISFACTION_PRECISION` this equals average precision.
//
// # Safety
//
// `ranking` must come from [`stopsat_ranking_new`] and not be freed;
// `out_score` and `out_residual` must be writable.
enum StopsatStatus stopsat_ap_score(const struct StopsatRanking *ranking,
                                    enum StopsatSatisfaction satisfaction,
                                    double *out_score,
                                    double *out_residual);

// Scores a ranking under the constant-hazard stopping model with the given
// persistence in [0, 1).
//
// With `STOPSAT_SATISFACTION_GAIN_BINARY` this equals rank-biased precision.
//
// # Safety
//
// Same pointer conventions as [`stopsat_ap_score`].
enum StopsatStatus stopsat_rbp_score(const struct StopsatRanking *ranking,
                                     double persistence,
                                     enum StopsatSatisfaction satisfaction,
                                     double *out_score,
                                     double *out_residual);

// Scores a ranking under the willingness/expectation stopping model.
//
// # Safety
//
// Same pointer conventions as [`stopsat_ap_score`]; `params` must point to
// a readable [`StopsatWeParams`].
enum StopsatStatus stopsat_we_score(const struct StopsatRanking *ranking,
                                    const struct StopsatWeParams *params,
                                    enum StopsatSatisfaction satisfaction,
                                    double *out_score,
                                    double *out_residual);

// Returns the message of the most recent failure on this thread, or null if
// none occurred. The caller owns the string and must release it with
// [`stopsat_string_free`].
char *stopsat_last_error_message(void);

// Releases a string returned by this library. A null pointer is ignored.
//
// # Safety
//
// `s` must be null or a pointer obtained from [`stopsat_last_error_message`]
// that has not been freed yet.
void stopsat_string_free(char *s);

// The library version as a static NUL-terminated string; do not free.
const char *stopsat_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STOPSAT_H */
