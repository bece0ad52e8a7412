#ifndef MULTIBRACKET_H
#define MULTIBRACKET_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum MbStatus {
  MB_OK = 0,
  // A check ran and did not hold.
  MB_FAIL = 1,
  MB_NULL_POINTER = 2,
  MB_INVALID_UTF8 = 3,
  // Malformed JSON or a file that does not describe a valid object.
  MB_PARSE_ERROR = 4,
  // Arguments out of range or of the wrong shape.
  MB_INVALID_ARGUMENT = 5,
  MB_NO_ZERO_ELEMENT = 6,
  // The matrices are linearly dependent or their brackets leave their span.
  MB_NOT_EXTRACTABLE = 7,
  MB_UNSUPPORTED_ORDER = 8,
  MB_INTERNAL_ERROR = 9,
} MbStatus;

// A multialgebra given by its structure constants.
typedef struct MbAlgebra MbAlgebra;

// An S-expanded algebra together with its semigroup and pair basis.
typedef struct MbExpanded MbExpanded;

// A list of square rational matrices.
typedef struct MbRep MbRep;

// A validated finite Abelian semigroup.
typedef struct MbSemigroup MbSemigroup;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the last failure on this thread, or null. The pointer
// stays valid until the next failing call on this thread.
const char *mb_last_error_message(void);

// Releases a string returned by this library.
//
// # Safety
// `s` must be null or a string obtained from this library, not yet freed.
void mb_string_free(char *s);

// Releases a handle; null is ignored.
//
// # Safety
// The handle must come from this library and not have been freed.
void mb_semigroup_free(struct MbSemigroup *handle);

// Releases a handle; null is ignored.
//
// # Safety
// The handle must come from this library and not have been freed.
void mb_algebra_free(struct MbAlgebra *handle);

// Releases a handle; null is ignored.
//
// # Safety
// The handle must come from this library and not have been freed.
void mb_expanded_free(struct MbExpanded *handle);

// Releases a handle; null is ignored.
//
// # Safety
// The handle must come from this library and not have been freed.
void mb_rep_free(struct MbRep *handle);

// Parses and validates a semigroup file.
//
// # Safety
// `json` must be a NUL-terminated string and `out` writable.
enum MbStatus mb_semigroup_from_json(const char *json, struct MbSemigroup **out);

// The semigroup S_E^(n) with elements 0..=n+1.
//
// # Safety
// `out` must be writable.
enum MbStatus mb_semigroup_gen_se(size_t n, struct MbSemigroup **out);

// # Safety
// `s` must be a live handle and `out` writable.
enum MbStatus mb_semigroup_to_json(const struct MbSemigroup *s, char **out);

// # Safety
// `s` must be a live handle and `out` writable.
enum MbStatus mb_semigroup_order(const struct MbSemigroup *s, size_t *out);

// Index of the product of elements `a` and `b`.
//
// # Safety
// `s` must be a live handle and `out` writable.
enum MbStatus mb_semigroup_product(const struct MbSemigroup *s, size_t a, size_t b, size_t *out);

// Index of the absorbing element, or `MB_NO_ZERO_ELEMENT`.
//
// # Safety
// `s` must be a live handle and `out` writable.
enum MbStatus mb_semigroup_zero_element(const struct MbSemigroup *s, size_t *out);

// Parses an algebra file, bringing lower index tuples into canonical order.
//
// # Safety
// `json` must be a NUL-terminated string and `out` writable.
enum MbStatus mb_algebra_from_json(const char *json, struct MbAlgebra **out);

// # Safety
// `a` must be a live handle and `out` writable.
enum MbStatus mb_algebra_to_json(const struct MbAlgebra *a, char **out);

// # Safety
// `a` must be a live handle and `out` writable.
enum MbStatus mb_algebra_dim(const struct MbAlgebra *a, size_t *out);

// # Safety
// `a` must be a live handle and `out` writable.
enum MbStatus mb_algebra_order(const struct MbAlgebra *a, size_t *out);

// Checks the generalized Jacobi identity. Writes the number of violating
// `(tuple, upper index)` pairs to `violations` and returns `MB_OK` when
// there are none, `MB_FAIL` otherwise.
//
// # Safety
// `a` must be a live handle and `violations` writable.
enum MbStatus mb_algebra_check_gji(const struct MbAlgebra *a, uint64_t *violations);

// The S-expansion of `a` by `s`.
//
// # Safety
// `a` and `s` must be live handles and `out` writable.
enum MbStatus mb_expand(const struct MbAlgebra *a,
                        const struct MbSemigroup *s,
                        struct MbExpanded **out);

// Reads an expanded algebra file produced with semigroup `s`.
//
// # Safety
// `json` must be a NUL-terminated string, `s` a live handle and `out` writable.
enum MbStatus mb_expanded_from_json(const char *json,
                                    const struct MbSemigroup *s,
                                    struct MbExpanded **out);

// # Safety
// `e` must be a live handle and `out` writable.
enum MbStatus mb_expanded_to_json(const struct MbExpanded *e, char **out);

// A copy of the underlying algebra, as a separate handle.
//
// # Safety
// `e` must be a live handle and `out` writable.
enum MbStatus mb_expanded_algebra(const struct MbExpanded *e, struct MbAlgebra **out);

// Removes every generator carrying the semigroup's zero element.
//
// # Safety
// `e` must be a live handle and `out` writable.
enum MbStatus mb_zero_reduce(const struct MbExpanded *e, struct MbExpanded **out);

// Parses a matrix representation file.
//
// # Safety
// `json` must be a NUL-terminated string and `out` writable.
enum MbStatus mb_rep_from_json(const char *json, struct MbRep **out);

// Structure constants of the `n`-bracket in the span of the matrices.
//
// # Safety
// `rep` must be a live handle and `out` writable.
enum MbStatus mb_extract(const struct MbRep *rep, size_t n, struct MbAlgebra **out);

// Checks the nested-bracket identity on `trials` sampled tuples (0 means
// all). Writes the number of failing tuples and returns `MB_OK` or `MB_FAIL`.
//
// # Safety
// `rep` must be a live handle and `violations` writable.
enum MbStatus mb_verify_identity(const struct MbRep *rep,
                                 size_t n,
                                 size_t trials,
                                 uint64_t seed,
                                 uint64_t *violations);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MULTIBRACKET_H */
