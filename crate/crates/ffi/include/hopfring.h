#ifndef HOPFRING_H
#define HOPFRING_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Flavor of stable ring for `hr_limit_mul`.
 */
typedef enum HrFlavor {
  HR_FLAVOR_DINF = 0,
  HR_FLAVOR_CX = 1,
  HR_FLAVOR_Q0X = 2,
} HrFlavor;

typedef enum HrStatus {
  HR_STATUS_OK = 0,
  HR_STATUS_NULL_POINTER = 1,
  HR_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed diagram, sequence or presentation.
   */
  HR_STATUS_PARSE = 3,
  /**
   * A mathematically invalid request (truncation exceeded, bad restriction, ...).
   */
  HR_STATUS_MATH = 4,
  HR_STATUS_PANIC = 5,
} HrStatus;

/**
 * Opaque algebra handle.
 */
typedef struct HrAlgebra HrAlgebra;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; valid until the next call.
 */
const char *hr_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void hr_string_free(char *s);

/**
 * Algebra over the point at prime `p`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum HrStatus hr_algebra_point(uint32_t p, struct HrAlgebra **out);

/**
 * Algebra over a JSON coefficient presentation.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum HrStatus hr_algebra_from_json(const char *json, struct HrAlgebra **out);

/**
 * # Safety
 * `h` must be null or a handle from this library, not yet freed.
 */
void hr_algebra_free(struct HrAlgebra *h);

/**
 * # Safety
 * `h` must be a live handle.
 */
uint32_t hr_algebra_prime(const struct HrAlgebra *h);

/**
 * Number of skyline basis monomials in tri-grade `(n, d, e)`.
 *
 * # Safety
 * `h` must be a live handle and `out` a valid pointer.
 */
enum HrStatus hr_count_skyline(const struct HrAlgebra *h,
                               uint64_t n,
                               uint64_t d,
                               uint8_t e,
                               uint64_t *out);

/**
 * Number of Nakaoka monomials in tri-grade `(n, d, e)`.
 *
 * # Safety
 * `h` must be a live handle and `out` a valid pointer.
 */
enum HrStatus hr_count_nakaoka(const struct HrAlgebra *h,
                               uint64_t n,
                               uint64_t d,
                               uint8_t e,
                               uint64_t *out);

/**
 * Canonical form of a diagram or sum of diagrams.
 *
 * # Safety
 * `h` must be a live handle, `a` a NUL-terminated string, `out` a valid pointer.
 */
enum HrStatus hr_normalize(const struct HrAlgebra *h, const char *a, char **out);

/**
 * Cup product.
 *
 * # Safety
 * As for `hr_normalize`, with `b` also a NUL-terminated string.
 */
enum HrStatus hr_cup(const struct HrAlgebra *h, const char *a, const char *b, char **out);

/**
 * Transfer product.
 *
 * # Safety
 * As for `hr_cup`.
 */
enum HrStatus hr_transfer(const struct HrAlgebra *h, const char *a, const char *b, char **out);

/**
 * Coproduct, rendered as `c*left (x) right + ...`.
 *
 * # Safety
 * As for `hr_normalize`.
 */
enum HrStatus hr_coproduct(const struct HrAlgebra *h, const char *a, char **out);

/**
 * Divided power `a^[r]`.
 *
 * # Safety
 * As for `hr_normalize`.
 */
enum HrStatus hr_divided_power(const struct HrAlgebra *h, const char *a, uint64_t r, char **out);

/**
 * Restriction `ρ_{n,m}` from component `m` to component `n`.
 *
 * # Safety
 * As for `hr_normalize`.
 */
enum HrStatus hr_restrict(const struct HrAlgebra *h,
                          const char *a,
                          uint64_t n,
                          uint64_t m,
                          char **out);

/**
 * Cup product of limit classes; operands are read as `y|1^[*]`.
 *
 * # Safety
 * As for `hr_cup`.
 */
enum HrStatus hr_limit_mul(const struct HrAlgebra *h,
                           const char *a,
                           const char *b,
                           enum HrFlavor flavor,
                           char **out);

/**
 * Minimal sequence of the class `I_S[k]` (or `I'_S[k]` when `primed`),
 * rendered as `(e1,i1,...)`.
 *
 * # Safety
 * `set` must point to `len` values (or be null with `len == 0`); `out` must be valid.
 */
enum HrStatus hr_minimal_sequence(uint32_t p,
                                  const uint32_t *set,
                                  size_t len,
                                  uint32_t k,
                                  bool primed,
                                  char **out);

/**
 * Stable generators up to `max_degree`, one `block<TAB>degree<TAB>h` line each
 * (`h` is `inf` when never nilpotent).
 *
 * # Safety
 * `h` must be a live handle and `out` a valid pointer.
 */
enum HrStatus hr_stable_generators(const struct HrAlgebra *h,
                                   uint64_t max_degree,
                                   enum HrFlavor flavor,
                                   char **out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* HOPFRING_H */
