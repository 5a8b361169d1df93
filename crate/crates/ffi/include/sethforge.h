#ifndef SETHFORGE_H
#define SETHFORGE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SfOracle {
  SF_ORACLE_DP = 0,
  SF_ORACLE_BRUTE = 1,
} SfOracle;

typedef enum SfStatus {
  SF_STATUS_OK = 0,
  SF_STATUS_NULL_POINTER = 1,
  SF_STATUS_INVALID_UTF8 = 2,
  SF_STATUS_PARSE = 3,
  SF_STATUS_DEGENERATE_INPUT = 4,
  SF_STATUS_INVALID_PARAMETER = 5,
  SF_STATUS_SIZE_CAP = 6,
  SF_STATUS_STATE_CAP = 7,
  SF_STATUS_SOLVER = 8,
  SF_STATUS_IO = 9,
  SF_STATUS_INVALID_BUNDLE = 10,
  SF_STATUS_PANIC = 11,
} SfStatus;

/**
 * Opaque CNF formula.
 */
typedef struct SfFormula SfFormula;

/**
 * Opaque reduced instance.
 */
typedef struct SfInstance SfInstance;

typedef struct SfInstanceInfo {
  size_t vertices;
  size_t edges;
  /**
   * Width of the shipped decomposition.
   */
  size_t width;
  size_t width_bound;
  bool has_target;
  int64_t target;
} SfInstanceInfo;

typedef struct SfAnswer {
  /**
   * Whether the optimum meets the instance target.
   */
  bool verdict;
  bool has_optimum;
  int64_t optimum;
  size_t max_states;
} SfAnswer;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty if none. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *sf_last_error(void);

const char *sf_version(void);

/**
 * Parses DIMACS CNF text.
 *
 * # Safety
 * `dimacs` must be a NUL-terminated string; `out` must be writable.
 */
enum SfStatus sf_formula_parse(const char *dimacs, struct SfFormula **out);

/**
 * # Safety
 * `f` must come from `sf_formula_parse` and not be used afterwards; null is ignored.
 */
void sf_formula_free(struct SfFormula *f);

/**
 * Exhaustive satisfiability check (at most 24 variables).
 *
 * # Safety
 * `f` must be a live formula handle; `out` must be writable.
 */
enum SfStatus sf_formula_satisfiable(const struct SfFormula *f, bool *out);

/**
 * Reduces a formula. `problem` is one of is, ds, maxcut, qcol, qlist, oct,
 * packing, partition.
 *
 * # Safety
 * `f` must be a live formula handle, `problem` a NUL-terminated string and
 * `out` writable.
 */
enum SfStatus sf_reduce(const struct SfFormula *f,
                        const char *problem,
                        uint32_t p,
                        uint32_t q,
                        struct SfInstance **out);

/**
 * # Safety
 * `i` must come from `sf_reduce` or `sf_bundle_read` and not be used
 * afterwards; null is ignored.
 */
void sf_instance_free(struct SfInstance *i);

/**
 * # Safety
 * `i` must be a live instance handle; `out` must be writable.
 */
enum SfStatus sf_instance_info(const struct SfInstance *i, struct SfInstanceInfo *out);

/**
 * Solves with the decomposition DP or the brute-force oracle. `state_cap`
 * of 0 keeps the default memory cap.
 *
 * # Safety
 * `i` must be a live instance handle; `out` must be writable.
 */
enum SfStatus sf_solve(const struct SfInstance *i,
                       enum SfOracle oracle,
                       size_t state_cap,
                       struct SfAnswer *out);

/**
 * Writes `dir/name.{gr,td,json}`.
 *
 * # Safety
 * `i` must be a live instance handle; `dir` and `name` NUL-terminated strings.
 */
enum SfStatus sf_bundle_write(const struct SfInstance *i, const char *dir, const char *name);

/**
 * Reads a bundle from any of its files or their common stem.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum SfStatus sf_bundle_read(const char *path, struct SfInstance **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SETHFORGE_H */
