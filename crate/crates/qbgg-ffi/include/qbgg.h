#ifndef QBGG_H
#define QBGG_H

/* Generated by cbindgen from crates/qbgg-ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes of every fallible function.
typedef enum QbggStatus {
  // Success.
  QBGG_STATUS_OK = 0,
  // A required pointer argument was NULL.
  QBGG_STATUS_NULL_POINTER = 1,
  // A string argument was not valid UTF-8.
  QBGG_STATUS_INVALID_UTF8 = 2,
  // Parameters violate an admissibility rule.
  QBGG_STATUS_INVALID_PARAMETER = 3,
  // A number or list could not be parsed.
  QBGG_STATUS_PARSE = 4,
  // The highest weight is not dominant integral.
  QBGG_STATUS_NOT_DOMINANT = 5,
  // Division by zero, or a twist hitting a pole of a trace or character.
  QBGG_STATUS_DEGENERATE = 6,
  // A rational power has no rational value.
  QBGG_STATUS_INEXACT_ROOT = 7,
  // Operators that must commute do not.
  QBGG_STATUS_NON_COMMUTING = 8,
  // Any other failure of the computation.
  QBGG_STATUS_INTERNAL = 9,
  // A panic was caught at the boundary.
  QBGG_STATUS_PANIC = 10,
} QbggStatus;

// Opaque operator on the quantum space, split into formal `τ`-classes.
typedef struct QbggOperator QbggOperator;

// Opaque twist `τ` tied to an algebra.
typedef struct QbggTwist QbggTwist;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Version of the library as a static NUL-terminated string.
const char *qbgg_version(void);

// Message of the last failed call on this thread (empty after success).
// The pointer stays valid until the next call into the library on this thread.
const char *qbgg_last_error(void);

// Releases a string returned by the library.
//
// # Safety
// `s` must be NULL or a string returned by this library, not yet freed.
void qbgg_string_free(char *s);

// Creates a twist for the algebra `letter` (`A`, `B`, `C`, `D`, or `BD`
// with `size` the dimension K) of the given size and comma-separated `tau`.
// Non-generic twists are rejected with [`QbggStatus::Degenerate`].
//
// # Safety
// String arguments must be NUL-terminated; `out` must be writable.
enum QbggStatus qbgg_twist_new(const char *letter,
                               size_t size,
                               const char *tau,
                               struct QbggTwist **out);

// Releases a twist.
//
// # Safety
// `twist` must be NULL or a handle from [`qbgg_twist_new`], not yet freed.
void qbgg_twist_free(struct QbggTwist *twist);

// Character of the finite-dimensional module of `case` at parameter `t`,
// evaluated at the twist, as a rational string.
//
// # Safety
// `twist` must be a live handle; strings NUL-terminated; `out` writable.
enum QbggStatus qbgg_character(const struct QbggTwist *twist,
                               const char *case_,
                               const char *t,
                               char **out);

// Transfer matrix of the finite-dimensional module of `case` at `t` on `sites` sites.
//
// # Safety
// `twist` must be a live handle; strings NUL-terminated; `out` writable.
enum QbggStatus qbgg_transfer_finite(const struct QbggTwist *twist,
                                     const char *case_,
                                     const char *t,
                                     size_t sites,
                                     struct QbggOperator **out);

// Q-operator `Q_I` of `gl_n` for the 1-based subset `I` (`subset[0..len]`)
// on `sites` sites; the twist must be of type A.
//
// # Safety
// `twist` must be a live handle; `subset` valid for `len` reads; `out` writable.
enum QbggStatus qbgg_q_subset(const struct QbggTwist *twist,
                              const size_t *subset,
                              size_t len,
                              size_t sites,
                              struct QbggOperator **out);

// Operator as JSON: `[{"class": [...], "operator": {"N", "K", "coeffs"}}]`.
//
// # Safety
// `op` must be a live handle; `out` writable.
enum QbggStatus qbgg_operator_to_json(const struct QbggOperator *op, char **out);

// True (1) when two operators agree exactly, class by class.
//
// # Safety
// Both handles must be live; `out` writable.
enum QbggStatus qbgg_operator_equal(const struct QbggOperator *a,
                                    const struct QbggOperator *b,
                                    bool *out);

// Releases an operator.
//
// # Safety
// `op` must be NULL or a handle returned by this library, not yet freed.
void qbgg_operator_free(struct QbggOperator *op);

// Runs a named suite (`rtt`, `bgg`, `det`, …, as in the command line) over its
// acceptance grid with the given seed. Writes the JSON-lines report stream
// and, if `failures` is non-NULL, the number of failed checks.
// The floating-point `oracle` suite runs only when `allow_oracle` is true.
//
// # Safety
// `suite` NUL-terminated; `json_lines` writable; `failures` NULL or writable.
enum QbggStatus qbgg_run_suite(const char *suite,
                               uint64_t seed,
                               bool allow_oracle,
                               char **json_lines,
                               size_t *failures);

// Runs acceptance criterion `number` (1–9); output as for [`qbgg_run_suite`].
//
// # Safety
// `json_lines` writable; `failures` NULL or writable.
enum QbggStatus qbgg_run_criterion(size_t number,
                                   uint64_t seed,
                                   char **json_lines,
                                   size_t *failures);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QBGG_H */
