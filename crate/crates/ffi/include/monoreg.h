/* C interface to the monoreg monomial-ideal library. Generated by cbindgen; do not edit. */

#ifndef MONOREG_H
#define MONOREG_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum MonoregStatus {
  MONOREG_STATUS_OK = 0,
  /**
   * A required pointer argument was NULL.
   */
  MONOREG_STATUS_NULL_POINTER = 1,
  /**
   * An input string was not valid UTF-8.
   */
  MONOREG_STATUS_INVALID_UTF8 = 2,
  /**
   * The input could not be parsed as an ideal or monomial.
   */
  MONOREG_STATUS_PARSE_ERROR = 3,
  /**
   * The operation is undefined for this input (zero or unit ideal,
   * wrong class, dimension mismatch).
   */
  MONOREG_STATUS_UNDEFINED_INPUT = 4,
  /**
   * The computation would overflow or exceed the supported size.
   */
  MONOREG_STATUS_TOO_LARGE = 5,
  /**
   * An internal invariant failed.
   */
  MONOREG_STATUS_INTERNAL = 6,
} MonoregStatus;

/**
 * Opaque handle to a canonical monomial ideal.
 */
typedef struct MonoregIdeal MonoregIdeal;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message for this thread. Never NULL; valid until the next
 * failing call on the same thread. Do not free.
 */
const char *monoreg_last_error_message(void);

/**
 * Parse an ideal from the text format (`x^2, x*y^2, y^3`) or the
 * canonical JSON form. The result is minimalized and canonically sorted.
 *
 * # Safety
 * `input` must be a NUL-terminated string; `out` must be a valid pointer.
 */
enum MonoregStatus monoreg_ideal_parse(const char *input, struct MonoregIdeal **out);

/**
 * Release an ideal handle. NULL is a no-op.
 *
 * # Safety
 * `handle` must be NULL or a pointer from this library, not yet freed.
 */
void monoreg_ideal_free(struct MonoregIdeal *handle);

/**
 * Release a string returned by this library. NULL is a no-op.
 *
 * # Safety
 * `s` must be NULL or a string pointer from this library, not yet freed.
 */
void monoreg_string_free(char *s);

/**
 * Canonical JSON form of the ideal.
 *
 * # Safety
 * `handle` must be a live ideal handle; `out` must be valid.
 */
enum MonoregStatus monoreg_ideal_to_json(const struct MonoregIdeal *handle, char **out);

/**
 * Ambient number of variables.
 *
 * # Safety
 * `handle` must be a live ideal handle; `out` must be valid.
 */
enum MonoregStatus monoreg_ideal_dimension(const struct MonoregIdeal *handle, size_t *out);

/**
 * Number of minimal generators.
 *
 * # Safety
 * `handle` must be a live ideal handle; `out` must be valid.
 */
enum MonoregStatus monoreg_ideal_num_gens(const struct MonoregIdeal *handle, size_t *out);

/**
 * Integral closure as a new handle.
 *
 * # Safety
 * `handle` must be a live ideal handle; `out` must be valid.
 */
enum MonoregStatus monoreg_ideal_closure(const struct MonoregIdeal *handle,
                                         struct MonoregIdeal **out);

/**
 * Whether the ideal equals its integral closure.
 *
 * # Safety
 * `handle` must be a live ideal handle; `out` must be valid.
 */
enum MonoregStatus monoreg_ideal_is_integrally_closed(const struct MonoregIdeal *handle, bool *out);

/**
 * Maximum corner-point degree of the Newton polyhedron.
 *
 * # Safety
 * `handle` must be a live ideal handle; `out` must be valid.
 */
enum MonoregStatus monoreg_ideal_delta(const struct MonoregIdeal *handle, uint64_t *out);

/**
 * Height (codimension) of the ideal.
 *
 * # Safety
 * `handle` must be a live ideal handle; `out` must be valid.
 */
enum MonoregStatus monoreg_ideal_height(const struct MonoregIdeal *handle, size_t *out);

/**
 * Castelnuovo-Mumford regularity of the ideal over the rationals.
 *
 * # Safety
 * `handle` must be a live ideal handle; `out` must be valid.
 */
enum MonoregStatus monoreg_ideal_regularity(const struct MonoregIdeal *handle, int64_t *out);

/**
 * Classification flags as a JSON object string.
 *
 * # Safety
 * `handle` must be a live ideal handle; `out` must be valid.
 */
enum MonoregStatus monoreg_ideal_classify_json(const struct MonoregIdeal *handle, char **out);

/**
 * Full verification record as a JSON string, checking the power bounds
 * for `m = 1..=hoa_max`.
 *
 * # Safety
 * `handle` must be a live ideal handle; `out` must be valid.
 */
enum MonoregStatus monoreg_verify_json(const struct MonoregIdeal *handle,
                                       uint64_t hoa_max,
                                       char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MONOREG_H */
