#ifndef ADIC_SHIFTS_H
#define ADIC_SHIFTS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum AdicStatus {
  ADIC_STATUS_OK = 0,
  ADIC_STATUS_NULL_POINTER = 1,
  ADIC_STATUS_INVALID_BASE = 2,
  ADIC_STATUS_INVALID_ARGUMENT = 3,
  ADIC_STATUS_OUT_OF_RANGE = 4,
  ADIC_STATUS_MISMATCH = 5,
  ADIC_STATUS_NOT_CONVERGED = 6,
  ADIC_STATUS_PARSE_ERROR = 7,
  ADIC_STATUS_UNKNOWN_CHECK = 8,
  ADIC_STATUS_INFEASIBLE = 9,
  ADIC_STATUS_IO = 10,
  ADIC_STATUS_PANIC = 11,
} AdicStatus;

/**
 * The shifts.
 */
typedef enum AdicShift {
  ADIC_SHIFT_U = 0,
  ADIC_SHIFT_V = 1,
  ADIC_SHIFT_S = 2,
  ADIC_SHIFT_W = 3,
} AdicShift;

/**
 * An operator on a truncated space.
 */
typedef struct AdicOperator AdicOperator;

/**
 * A truncated tree Hilbert space.
 */
typedef struct AdicSpace AdicSpace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread. Valid until the next
 * failing call on the same thread; do not free.
 */
const char *adic_last_error(void);

/**
 * Static description of a status code; do not free.
 */
const char *adic_status_message(enum AdicStatus status);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void adic_string_free(char *s);

/**
 * Creates the space spanned by tree vertices of level `0..=depth`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum AdicStatus adic_space_new(uint32_t s, uint32_t depth, struct AdicSpace **out);

/**
 * # Safety
 * `space` must come from [`adic_space_new`] and not have been freed. Null is ignored.
 */
void adic_space_free(struct AdicSpace *space);

/**
 * Dimension of the space, or 0 for a null handle.
 *
 * # Safety
 * `space` must be null or a live handle.
 */
size_t adic_space_dim(const struct AdicSpace *space);

/**
 * Level-lex position of the basis vector `E_(level,index)`.
 *
 * # Safety
 * Handles and `out` must be valid.
 */
enum AdicStatus adic_space_index(const struct AdicSpace *space,
                                 uint32_t level,
                                 uint64_t index,
                                 size_t *out);

/**
 * The shift `kind`, or its adjoint when `adjoint` is true.
 *
 * # Safety
 * Handles and `out` must be valid.
 */
enum AdicStatus adic_shift_new(const struct AdicSpace *space,
                               enum AdicShift kind,
                               bool adjoint,
                               struct AdicOperator **out);

/**
 * Builds an operator from an expression such as `"I - U.U*"`; see the CLI
 * documentation for the factor names.
 *
 * # Safety
 * Handles, `spec` and `out` must be valid; `spec` is NUL-terminated UTF-8.
 */
enum AdicStatus adic_operator_parse(const struct AdicSpace *space,
                                    const char *spec,
                                    struct AdicOperator **out);

/**
 * # Safety
 * `op` must come from this library and not have been freed. Null is ignored.
 */
void adic_operator_free(struct AdicOperator *op);

/**
 * `a b` (apply `b` first).
 *
 * # Safety
 * Handles and `out` must be valid.
 */
enum AdicStatus adic_operator_mul(const struct AdicOperator *a,
                                  const struct AdicOperator *b,
                                  struct AdicOperator **out);

/**
 * `a + (re + i im) b`.
 *
 * # Safety
 * Handles and `out` must be valid.
 */
enum AdicStatus adic_operator_add_scaled(const struct AdicOperator *a,
                                         const struct AdicOperator *b,
                                         double re,
                                         double im,
                                         struct AdicOperator **out);

/**
 * # Safety
 * Handles and `out` must be valid.
 */
enum AdicStatus adic_operator_adjoint(const struct AdicOperator *a, struct AdicOperator **out);

/**
 * `<E_row, a E_col>` split into real and imaginary parts.
 *
 * # Safety
 * Handles and output pointers must be valid.
 */
enum AdicStatus adic_operator_entry(const struct AdicOperator *a,
                                    uint32_t row_level,
                                    uint64_t row_index,
                                    uint32_t col_level,
                                    uint64_t col_index,
                                    double *re,
                                    double *im);

/**
 * Number of stored nonzero entries, or 0 for a null handle.
 *
 * # Safety
 * `a` must be null or a live handle.
 */
size_t adic_operator_nnz(const struct AdicOperator *a);

/**
 * Largest singular value to relative tolerance `tol`.
 *
 * # Safety
 * Handles and `out` must be valid.
 */
enum AdicStatus adic_operator_norm(const struct AdicOperator *a, double tol, double *out);

/**
 * The operator's nonzero entries as text; free with [`adic_string_free`].
 *
 * # Safety
 * Handles and `out` must be valid.
 */
enum AdicStatus adic_operator_dump(const struct AdicOperator *a, char **out);

/**
 * Runs one named check. A `tol` of 0 keeps the check's own tolerance.
 *
 * # Safety
 * `name` is NUL-terminated UTF-8; output pointers must be valid.
 */
enum AdicStatus adic_run_check(const char *name,
                               uint32_t s,
                               uint32_t depth,
                               uint64_t seed,
                               double tol,
                               bool *pass,
                               double *max_residual);

/**
 * Runs the checks matching `filter` and returns the JSON report; free it
 * with [`adic_string_free`]. `passed` receives the overall verdict.
 *
 * # Safety
 * `filter` is NUL-terminated UTF-8; output pointers must be valid.
 */
enum AdicStatus adic_run_suite_json(const char *filter,
                                    uint32_t s,
                                    uint32_t depth,
                                    uint64_t seed,
                                    bool *passed,
                                    char **report);

/**
 * Default seed used by the harness.
 */
uint64_t adic_default_seed(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ADIC_SHIFTS_H */
