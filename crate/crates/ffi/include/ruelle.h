#ifndef RUELLE_H
#define RUELLE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RuelleStatus {
  RUELLE_STATUS_OK = 0,
  RUELLE_STATUS_NULL_POINTER = 1,
  RUELLE_STATUS_INVALID_ARGUMENT = 2,
  RUELLE_STATUS_PARSE = 3,
  RUELLE_STATUS_GUARD_EXCEEDED = 4,
  RUELLE_STATUS_NOT_EXPANDING = 5,
  RUELLE_STATUS_PRECONDITION = 6,
  /**
   * A result does not fit the output type.
   */
  RUELLE_STATUS_OVERFLOW = 7,
  RUELLE_STATUS_FAILURE = 8,
  RUELLE_STATUS_PANIC = 9,
} RuelleStatus;

/**
 * Square integer matrix.
 */
typedef struct RuelleMatrix RuelleMatrix;

/**
 * Rational zeta function `num(z) / den(z)`.
 */
typedef struct RuelleZeta RuelleZeta;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Valid until the next call.
 */
const char *ruelle_last_error(void);

/**
 * Static version string.
 */
const char *ruelle_version(void);

/**
 * # Safety
 * `s` must come from a `ruelle_*` function returning an owned string, and not be freed twice.
 */
void ruelle_string_free(char *s);

/**
 * Builds a `dim x dim` matrix from row-major entries.
 *
 * # Safety
 * `entries` must point to `dim * dim` readable values; `out_m` must be writable.
 */
enum RuelleStatus ruelle_matrix_new(uintptr_t dim,
                                    const int64_t *entries,
                                    struct RuelleMatrix **out_m);

/**
 * Parses the text format: a dimension line, then one line per row.
 *
 * # Safety
 * `src` must be a NUL-terminated string; `out_m` must be writable.
 */
enum RuelleStatus ruelle_matrix_parse(const char *src, struct RuelleMatrix **out_m);

/**
 * # Safety
 * `m` must be NULL or a live handle from `ruelle_matrix_new` / `ruelle_matrix_parse`.
 */
void ruelle_matrix_free(struct RuelleMatrix *m);

/**
 * `N_n = tr(A^n)` for a 0/1 transition matrix.
 *
 * # Safety
 * `m` must be a live handle; `count` must be writable.
 */
enum RuelleStatus ruelle_sft_count_periodic(const struct RuelleMatrix *m,
                                            uint64_t n,
                                            uint64_t *count);

/**
 * Entropy `log lambda` of an irreducible shift with its certified bracket.
 *
 * # Safety
 * `m` must be a live handle; the three outputs must be writable.
 */
enum RuelleStatus ruelle_sft_entropy(const struct RuelleMatrix *m,
                                     double *value,
                                     double *lower,
                                     double *upper);

/**
 * `|det(M^n - I)|` for a 2x2 integer matrix.
 *
 * # Safety
 * `m` must be a live handle; `count` must be writable.
 */
enum RuelleStatus ruelle_toral_count(const struct RuelleMatrix *m, uint64_t n, uint64_t *count);

/**
 * `det(I - zA)^-1` for a transition matrix.
 *
 * # Safety
 * `m` must be a live handle; `out_z` must be writable.
 */
enum RuelleStatus ruelle_zeta_from_sft(const struct RuelleMatrix *m, struct RuelleZeta **out_z);

/**
 * Zeta of `x -> kx mod 1` from the uniform cover with `4k` arcs.
 *
 * # Safety
 * `out_z` must be writable.
 */
enum RuelleStatus ruelle_zeta_circle(uint32_t k, struct RuelleZeta **out_z);

/**
 * Zeta of a toral endomorphism, fitted to `order` determinant counts.
 *
 * # Safety
 * `m` must be a live handle; `out_z` must be writable.
 */
enum RuelleStatus ruelle_zeta_toral(const struct RuelleMatrix *m,
                                    uintptr_t order,
                                    struct RuelleZeta **out_z);

/**
 * Parses `"num: c0 c1 ... / den: c0 c1 ..."`.
 *
 * # Safety
 * `src` must be a NUL-terminated string; `out_z` must be writable.
 */
enum RuelleStatus ruelle_zeta_parse(const char *src, struct RuelleZeta **out_z);

/**
 * # Safety
 * `z` must be NULL or a live zeta handle.
 */
void ruelle_zeta_free(struct RuelleZeta *z);

/**
 * Writes `N_1 .. N_len` into `counts`.
 *
 * # Safety
 * `z` must be a live handle; `counts` must have room for `len` values.
 */
enum RuelleStatus ruelle_zeta_counts(const struct RuelleZeta *z, uintptr_t len, uint64_t *counts);

/**
 * Radius of convergence and periodic entropy; `rho` is `+inf` when there is no pole.
 *
 * # Safety
 * `z` must be a live handle; both outputs must be writable.
 */
enum RuelleStatus ruelle_zeta_radius(const struct RuelleZeta *z, double *rho, double *entropy);

/**
 * Human-readable form such as `1/(1 - z - z^2)`. Free with `ruelle_string_free`.
 *
 * # Safety
 * `z` must be a live handle; `out_s` must be writable.
 */
enum RuelleStatus ruelle_zeta_to_string(const struct RuelleZeta *z, char **out_s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* RUELLE_H */
