#ifndef FIBRATOR_H
#define FIBRATOR_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum FibStatus {
  FIB_STATUS_OK = 0,
  FIB_STATUS_NULL_POINTER = 1,
  FIB_STATUS_INVALID_UTF8 = 2,
  FIB_STATUS_PARSE = 3,
  FIB_STATUS_INVALID_GROUP = 4,
  FIB_STATUS_NOT_SUBGROUP = 5,
  FIB_STATUS_NOT_IN_SEED = 6,
  FIB_STATUS_PRECONDITION = 7,
  FIB_STATUS_UNSUPPORTED = 8,
  FIB_STATUS_MISMATCH = 9,
  FIB_STATUS_INVALID_FUNCTOR = 10,
  FIB_STATUS_BUFFER_TOO_SMALL = 11,
  FIB_STATUS_NOT_INTEGER = 12,
  FIB_STATUS_INTERNAL = 13,
  FIB_STATUS_PANIC = 14,
} FibStatus;

/**
 * A functor on a seed over a family of groups.
 */
typedef struct FibFunctor FibFunctor;

/**
 * A finite group.
 */
typedef struct FibGroup FibGroup;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` (NUL
 * terminated, truncated to `len`). Returns the full message length.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t fib_last_error(char *buf, size_t len);

/**
 * Builds a group from a spec such as `S3`, `C2xC2` or `D8`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string and `out` a valid pointer.
 */
enum FibStatus fib_group_new(const char *spec, struct FibGroup **out);

/**
 * # Safety
 * `g` must be null or a handle from `fib_group_new` not yet freed.
 */
void fib_group_free(struct FibGroup *g);

/**
 * # Safety
 * `g` must be a live group handle and `out` a valid pointer.
 */
enum FibStatus fib_group_order(const struct FibGroup *g, size_t *out);

/**
 * Number of conjugacy classes of fibered pairs over `left × right`.
 *
 * # Safety
 * Handles must be live, `fiber` a NUL-terminated string such as `"2"`.
 */
enum FibStatus fib_pair_class_count(const struct FibGroup *left,
                                    const struct FibGroup *right,
                                    const char *fiber,
                                    size_t *out);

/**
 * Builds the `trivial` or `burnside` functor over a family spec such as
 * `S3-closure`. The trivial functor uses the k2only seed restricted to
 * full left projection; Burnside uses the selector-all seed.
 *
 * # Safety
 * Strings must be NUL-terminated and `out` a valid pointer.
 */
enum FibStatus fib_functor_new(const char *kind,
                               const char *family,
                               const char *fiber,
                               struct FibFunctor **out);

/**
 * # Safety
 * `f` must be null or a handle from `fib_functor_new` not yet freed.
 */
void fib_functor_free(struct FibFunctor *f);

/**
 * Rank of `F₊(G)`.
 *
 * # Safety
 * Handles must be live and `out` a valid pointer.
 */
enum FibStatus fib_plus_rank(const struct FibFunctor *f, const struct FibGroup *g, size_t *out);

/**
 * Mark matrix of `F` at `G`, row-major into `data`. The dimensions are
 * always written; `BufferTooSmall` is returned when `cap < rows·cols`.
 *
 * # Safety
 * Handles must be live, `rows`/`cols` valid, `data` null or `cap` slots.
 */
enum FibStatus fib_mark_matrix(const struct FibFunctor *f,
                               const struct FibGroup *g,
                               size_t *rows,
                               size_t *cols,
                               int64_t *data,
                               size_t cap);

/**
 * Runs a verification suite with default options over fiber `fiber` and
 * seed `seed`. Writes the number of failing cases to `failed` and, when
 * `report` is non-null, a JSON-lines report the caller frees with
 * `fib_string_free`.
 *
 * # Safety
 * Strings must be NUL-terminated; `failed` valid; `report` null or valid.
 */
enum FibStatus fib_verify(const char *suite,
                          const char *fiber,
                          uint64_t seed,
                          size_t *failed,
                          char **report);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void fib_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* FIBRATOR_H */
