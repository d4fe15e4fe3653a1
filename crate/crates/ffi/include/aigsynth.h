#ifndef AIGSYNTH_H
#define AIGSYNTH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum AigStatus {
  AIG_STATUS_OK = 0,
  AIG_STATUS_NULL_POINTER = 1,
  AIG_STATUS_INVALID_UTF8 = 2,
  AIG_STATUS_PARSE_ERROR = 3,
  AIG_STATUS_RECIPE_ERROR = 4,
  AIG_STATUS_EQUIV_ERROR = 5,
  AIG_STATUS_INTERNAL = 6,
} AigStatus;

/**
 * Opaque combinational graph.
 */
typedef struct AigHandle AigHandle;

/**
 * Opaque shared rewrite library.
 */
typedef struct AigLibrary AigLibrary;

typedef struct AigStats {
  size_t pis;
  size_t pos;
  size_t nodes;
  size_t edges;
  size_t inverters;
  size_t depth;
} AigStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call on the same thread.
 */
const char *aig_last_error(void);

/**
 * Parses BENCH text into a new graph.
 *
 * # Safety
 * `text` is a NUL-terminated string and `out` is writable.
 */
enum AigStatus aig_parse_bench(const char *text, struct AigHandle **out);

/**
 * Releases a graph. Null is ignored.
 *
 * # Safety
 * `handle` is null or came from this library and is not used afterwards.
 */
void aig_free(struct AigHandle *handle);

/**
 * # Safety
 * `handle` is a live graph and `out` is writable.
 */
enum AigStatus aig_stats(const struct AigHandle *handle, struct AigStats *out);

/**
 * # Safety
 * `handle` is a live graph and `out` is writable.
 */
enum AigStatus aig_write_bench(const struct AigHandle *handle, char **out);

/**
 * # Safety
 * `handle` is a live graph and `out` is writable.
 */
enum AigStatus aig_write_graphml(const struct AigHandle *handle, char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` is null or came from this library and is not used afterwards.
 */
void aig_string_free(char *s);

/**
 * Handle to the process-wide rewrite library, built on first use.
 *
 * # Safety
 * `out` is writable.
 */
enum AigStatus aig_library_new(struct AigLibrary **out);

/**
 * # Safety
 * `lib` is null or came from [`aig_library_new`] and is not used afterwards.
 */
void aig_library_free(struct AigLibrary *lib);

/**
 * Applies a recipe such as `"b; rw; rf -z"` and returns the final graph as
 * a new handle. The input graph is unchanged.
 *
 * # Safety
 * `handle` and `lib` are live, `recipe` is a NUL-terminated string and
 * `out` is writable.
 */
enum AigStatus aig_apply_recipe(const struct AigHandle *handle,
                                const struct AigLibrary *lib,
                                const char *recipe,
                                struct AigHandle **out);

/**
 * Combinational equivalence by name-matched inputs and outputs:
 * exhaustive up to 16 inputs, random simulation above.
 *
 * # Safety
 * `a` and `b` are live graphs and `equivalent` is writable.
 */
enum AigStatus aig_equiv(const struct AigHandle *a, const struct AigHandle *b, bool *equivalent);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AIGSYNTH_H */
