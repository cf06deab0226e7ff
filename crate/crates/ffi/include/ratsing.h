#ifndef RATSING_H
#define RATSING_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result code of every `ratsing_*` call.
 */
typedef enum RatsingStatus {
  RATSING_STATUS_OK = 0,
  /**
   * A required pointer argument was NULL.
   */
  RATSING_STATUS_NULL_POINTER = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  RATSING_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed JSON or a JSON document of the wrong shape.
   */
  RATSING_STATUS_PARSE_ERROR = 3,
  /**
   * A referenced file could not be read.
   */
  RATSING_STATUS_IO_ERROR = 4,
  /**
   * No catalog graph of that name.
   */
  RATSING_STATUS_UNKNOWN_GRAPH = 5,
  /**
   * An argument is out of its documented range (non-prime ell,
   * non-coprime HJ parameters, bad vertex data, ...).
   */
  RATSING_STATUS_INVALID_ARGUMENT = 6,
  /**
   * The input is well formed but the operation does not apply to it
   * (not negative definite, divisibility violated, ...).
   */
  RATSING_STATUS_DOMAIN_ERROR = 7,
  /**
   * Graph validation failed; the message lists the failing checks.
   */
  RATSING_STATUS_VALIDATION_FAILED = 8,
  /**
   * A value does not fit the requested C integer type.
   */
  RATSING_STATUS_OVERFLOW = 9,
  /**
   * An index is past the end.
   */
  RATSING_STATUS_OUT_OF_RANGE = 10,
  /**
   * Internal error; the library state is unaffected.
   */
  RATSING_STATUS_PANIC = 99,
} RatsingStatus;

/**
 * A weighted dual graph.
 */
typedef struct RatsingGraph RatsingGraph;

/**
 * A finitely generated abelian group `Z/d_1 ⊕ … ⊕ Z/d_k ⊕ Z^r`.
 */
typedef struct RatsingGroup RatsingGroup;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static string.
 */
const char *ratsing_version(void);

/**
 * Message for the most recent failure on this thread, or NULL if none.
 * Valid until the next failing call on the same thread.
 */
const char *ratsing_last_error_message(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` is NULL or was returned by this library and not yet freed.
 */
void ratsing_string_free(char *s);

/**
 * Parses a graph from its JSON form.
 *
 * # Safety
 * `json` is a NUL-terminated string; `out` is valid for writes.
 */
enum RatsingStatus ratsing_graph_from_json(const char *json, struct RatsingGraph **out);

/**
 * Loads a catalog graph by name (`"E8"`, `"HJ7_3"`, …). Honors
 * `RATSING_CATALOG_DIR`.
 *
 * # Safety
 * `name` is a NUL-terminated string; `out` is valid for writes.
 */
enum RatsingStatus ratsing_graph_from_catalog(const char *name, struct RatsingGraph **out);

/**
 * Generates the ADE graph of `type` (`"A5"`, `"D4"`, `"E8"`, …).
 *
 * # Safety
 * `type_name` is a NUL-terminated string; `out` is valid for writes.
 */
enum RatsingStatus ratsing_graph_ade(const char *type_name, struct RatsingGraph **out);

/**
 * Generates the Hirzebruch–Jung chain of the cyclic quotient `1/k(1, a)`.
 *
 * # Safety
 * `out` is valid for writes.
 */
enum RatsingStatus ratsing_graph_hj(int64_t k, int64_t a, struct RatsingGraph **out);

/**
 * Releases a graph. NULL is ignored.
 *
 * # Safety
 * `graph` is NULL or was returned by this library and not yet freed.
 */
void ratsing_graph_free(struct RatsingGraph *graph);

/**
 * # Safety
 * `graph` is a live handle; `out` is valid for writes.
 */
enum RatsingStatus ratsing_graph_vertex_count(const struct RatsingGraph *graph, size_t *out);

/**
 * Serializes a graph to JSON.
 *
 * # Safety
 * `graph` is a live handle; `out` is valid for writes.
 */
enum RatsingStatus ratsing_graph_to_json(const struct RatsingGraph *graph, char **out);

/**
 * Runs the validation checks at the prime `ell`. `passed` receives the
 * overall verdict; if `report_json` is non-NULL it receives the full
 * report. A failing verdict is not an error.
 *
 * # Safety
 * `graph` is a live handle; `passed` is valid for writes; `report_json`
 * is NULL or valid for writes.
 */
enum RatsingStatus ratsing_graph_validate(const struct RatsingGraph *graph,
                                          uint64_t ell,
                                          bool *passed,
                                          char **report_json);

/**
 * Computes the divisor class group of the singularity.
 *
 * # Safety
 * `graph` is a live handle; `out` is valid for writes.
 */
enum RatsingStatus ratsing_class_group(const struct RatsingGraph *graph, struct RatsingGroup **out);

/**
 * Releases a group. NULL is ignored.
 *
 * # Safety
 * `group` is NULL or was returned by this library and not yet freed.
 */
void ratsing_group_free(struct RatsingGroup *group);

/**
 * # Safety
 * `group` is a live handle; `out` is valid for writes.
 */
enum RatsingStatus ratsing_group_free_rank(const struct RatsingGroup *group, size_t *out);

/**
 * Number of invariant factors `d_1 | d_2 | … | d_k`, all greater than 1.
 *
 * # Safety
 * `group` is a live handle; `out` is valid for writes.
 */
enum RatsingStatus ratsing_group_factor_count(const struct RatsingGroup *group, size_t *out);

/**
 * The invariant factor at `index`. Returns `Overflow` if it does not fit
 * an `int64_t`; use [`ratsing_group_to_string`] for those.
 *
 * # Safety
 * `group` is a live handle; `out` is valid for writes.
 */
enum RatsingStatus ratsing_group_factor(const struct RatsingGroup *group,
                                        size_t index,
                                        int64_t *out);

/**
 * Group order, or `Overflow` if the group is infinite or the order does
 * not fit an `int64_t`.
 *
 * # Safety
 * `group` is a live handle; `out` is valid for writes.
 */
enum RatsingStatus ratsing_group_order(const struct RatsingGroup *group, int64_t *out);

/**
 * Text form, e.g. `"Z/2 ⊕ Z/2"` or `"0"`.
 *
 * # Safety
 * `group` is a live handle; `out` is valid for writes.
 */
enum RatsingStatus ratsing_group_to_string(const struct RatsingGroup *group, char **out);

/**
 * Local homology profile `H_0 … H_5` over `Z_ell` (or `Q_ell` when
 * `rational` is true), as JSON.
 *
 * # Safety
 * `graph` is a live handle; `out` is valid for writes.
 */
enum RatsingStatus ratsing_homology_json(const struct RatsingGraph *graph,
                                         uint64_t ell,
                                         bool rational,
                                         char **out);

/**
 * Dualizing-complex report for a surface document. String graph
 * references resolve as `catalog:NAME` or file paths.
 *
 * # Safety
 * `surface_json` is a NUL-terminated string; `out` is valid for writes.
 */
enum RatsingStatus ratsing_dualizing_report_json(const char *surface_json, char **out);

/**
 * Perversity verdict `{left_ok, right_ok, perverse}` for a strata
 * document, as JSON.
 *
 * # Safety
 * `strata_json` is a NUL-terminated string; `out` is valid for writes.
 */
enum RatsingStatus ratsing_perversity_json(const char *strata_json, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RATSING_H */
