#ifndef PHASELESS_H
#define PHASELESS_H

#include <stddef.h>
#include <stdint.h>

/**
 * Result codes. `PL_OK` is zero; everything else is an error.
 */
typedef enum PlStatus {
  PL_OK = 0,
  PL_NULL_POINTER = 1,
  PL_INVALID_ARGUMENT = 2,
  PL_PARSE_ERROR = 3,
  PL_NEGATIVE_ENTRY = 4,
  PL_DIMENSION_ERROR = 5,
  PL_CAPABILITY_ERROR = 6,
  PL_DOMAIN_ERROR = 7,
  PL_BUFFER_TOO_SMALL = 8,
  PL_INTERNAL_ERROR = 9,
} PlStatus;

/**
 * Opaque result of a maximality decision.
 */
typedef struct PlDecision PlDecision;

/**
 * Opaque nonnegative rational matrix.
 */
typedef struct PlMatrix PlMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *pl_last_error_message(void);

/**
 * Library version as a static nul-terminated string.
 */
const char *pl_version(void);

/**
 * Builds a matrix from `rows·cols` row-major doubles, rationalized at 1e-12.
 *
 * # Safety
 * `data` must point to `rows·cols` readable doubles and `out_matrix` to writable storage.
 */
enum PlStatus pl_matrix_from_f64(size_t rows,
                                 size_t cols,
                                 const double *data,
                                 struct PlMatrix **out_matrix);

/**
 * Parses matrix text: one row per line, comma-separated decimals or `p/q`.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out_matrix` writable.
 */
enum PlStatus pl_matrix_parse(const char *text, struct PlMatrix **out_matrix);

/**
 * # Safety
 * `m` must be null or a live handle.
 */
size_t pl_matrix_rows(const struct PlMatrix *m);

/**
 * # Safety
 * `m` must be null or a live handle.
 */
size_t pl_matrix_cols(const struct PlMatrix *m);

/**
 * # Safety
 * `m` must be null or a handle not freed before.
 */
void pl_matrix_free(struct PlMatrix *m);

/**
 * Decides maximality; the decision carries its certificate.
 *
 * # Safety
 * `m` must be a live handle and `out_decision` writable.
 */
enum PlStatus pl_decide(const struct PlMatrix *m, struct PlDecision **out_decision);

/**
 * 1 if nonmaximal, 0 if maximal, -1 for a null handle.
 *
 * # Safety
 * `d` must be null or a live handle.
 */
int pl_decision_is_nonmaximal(const struct PlDecision *d);

/**
 * Copies the weight vector of a nonmaximal decision into `buffer`. `written`
 * receives the length; `PL_BUFFER_TOO_SMALL` reports a short buffer, and a
 * maximal decision yields length 0.
 *
 * # Safety
 * `buffer` must hold `capacity` doubles (or be null with capacity 0).
 */
enum PlStatus pl_decision_lambda(const struct PlDecision *d,
                                 double *buffer,
                                 size_t capacity,
                                 size_t *written);

/**
 * Copies the column permutation of a maximal decision into `buffer`, in the
 * same way as [`pl_decision_lambda`].
 *
 * # Safety
 * `buffer` must hold `capacity` entries (or be null with capacity 0).
 */
enum PlStatus pl_decision_permutation(const struct PlDecision *d,
                                      size_t *buffer,
                                      size_t capacity,
                                      size_t *written);

/**
 * The certificate as key-value text. Release with [`pl_string_free`].
 *
 * # Safety
 * `d` must be a live handle and `out_text` writable.
 */
enum PlStatus pl_decision_certificate(const struct PlDecision *d, char **out_text);

/**
 * # Safety
 * `d` must be null or a handle not freed before.
 */
void pl_decision_free(struct PlDecision *d);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not freed before.
 */
void pl_string_free(char *s);

/**
 * Proven bounds `lower ≤ rank_θ ≤ upper`. `effort` 0 is low, anything else high.
 *
 * # Safety
 * `m` must be a live handle; `lower` and `upper` writable.
 */
enum PlStatus pl_bracket(const struct PlMatrix *m,
                         int effort,
                         uint64_t seed,
                         size_t *lower,
                         size_t *upper);

/**
 * `⌈√rank(A∘A)⌉`.
 *
 * # Safety
 * `m` must be a live handle and `bound` writable.
 */
enum PlStatus pl_hadamard_lower_bound(const struct PlMatrix *m, size_t *bound);

/**
 * Bounds on the typical phaseless rank of `n×m` matrices.
 *
 * # Safety
 * `lower` and `upper` must be writable.
 */
enum PlStatus pl_typical_rank_bounds(size_t n, size_t m, size_t *lower, size_t *upper);

/**
 * Amoeba membership of a row-major point; `log_scale` nonzero means the
 * coordinates are logarithms. `member` receives 1 or 0.
 *
 * # Safety
 * `point` must hold `rows·cols` doubles and `member` be writable.
 */
enum PlStatus pl_amoeba_membership(const double *point,
                                   size_t rows,
                                   size_t cols,
                                   int log_scale,
                                   int *member);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PHASELESS_H */
