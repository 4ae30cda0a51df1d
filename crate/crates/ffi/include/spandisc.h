#ifndef SPANDISC_H
#define SPANDISC_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SdStatus {
  SD_STATUS_OK = 0,
  SD_STATUS_NULL_POINTER = 1,
  SD_STATUS_INVALID_ARGUMENT = 2,
  SD_STATUS_DISCONNECTED = 3,
  SD_STATUS_TOO_LARGE = 4,
  SD_STATUS_INFEASIBLE = 5,
  SD_STATUS_IO = 6,
  SD_STATUS_PARSE = 7,
  SD_STATUS_PANIC = 8,
} SdStatus;

typedef enum SdAdversary {
  SD_ADVERSARY_UNIFORM_RANDOM = 0,
  SD_ADVERSARY_BALANCED_LOCAL = 1,
  SD_ADVERSARY_CUT_COLORING = 2,
  SD_ADVERSARY_ADAPTIVE_RECOLOR = 3,
} SdAdversary;

/**
 * Opaque edge colouring handle.
 */
typedef struct SdColoring SdColoring;

/**
 * Opaque graph handle.
 */
typedef struct SdGraph SdGraph;

/**
 * Outcome of [`sd_boost`].
 */
typedef struct SdBoostResult {
  int64_t signed_sum;
  uint64_t abs_discrepancy;
  size_t leaf_count;
  size_t swaps_applied;
  uint8_t case_tag;
  /**
   * 0 boosted, 1 already discrepant, 2 infeasible.
   */
  uint8_t status;
  bool swap_identity_holds;
  double epsilon_achieved;
} SdBoostResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Valid until the
 * next call into the library from the same thread.
 */
const char *sd_last_error(void);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum SdStatus sd_graph_gnp(size_t n, double p, uint64_t seed, struct SdGraph **out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum SdStatus sd_graph_gnm(size_t n, size_t m, uint64_t seed, struct SdGraph **out);

/**
 * Graph from `m` pairs laid out as `u0, v0, u1, v1, ...`.
 *
 * # Safety
 * `pairs` must point to `2 * m` readable values; `out` must be valid for
 * writes.
 */
enum SdStatus sd_graph_from_edges(size_t n, const size_t *pairs, size_t m, struct SdGraph **out);

/**
 * Load an edge list. When the file carries colours and `coloring_out` is
 * non-NULL, the colouring is returned too; otherwise `*coloring_out` is NULL.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be valid for writes and
 * `coloring_out` NULL or valid for writes.
 */
enum SdStatus sd_graph_load(const char *path,
                            struct SdGraph **out,
                            struct SdColoring **coloring_out);

/**
 * # Safety
 * `g` must be a live handle, `coloring` NULL or a live handle, `path` a
 * NUL-terminated string.
 */
enum SdStatus sd_graph_save(const struct SdGraph *g,
                            const struct SdColoring *coloring,
                            const char *path);

/**
 * # Safety
 * `g` must be NULL or a handle not yet freed.
 */
void sd_graph_free(struct SdGraph *g);

/**
 * # Safety
 * `g` must be a live handle; `n_out` and `m_out` valid for writes.
 */
enum SdStatus sd_graph_counts(const struct SdGraph *g, size_t *n_out, size_t *m_out);

/**
 * # Safety
 * `g` must be a live handle; `out` valid for writes.
 */
enum SdStatus sd_graph_is_connected(const struct SdGraph *g, bool *out);

/**
 * Colouring of `g` chosen by an adversary. `rounds` is used by the adaptive
 * adversary only and must be at least 1.
 *
 * # Safety
 * `g` must be a live handle; `out` valid for writes.
 */
enum SdStatus sd_coloring_make(const struct SdGraph *g,
                               enum SdAdversary kind,
                               uint64_t seed,
                               size_t rounds,
                               struct SdColoring **out);

/**
 * Sum of the colours over all edges.
 *
 * # Safety
 * `c` must be a live handle; `out` valid for writes.
 */
enum SdStatus sd_coloring_sum(const struct SdColoring *c, int64_t *out);

/**
 * # Safety
 * `c` must be NULL or a handle not yet freed.
 */
void sd_coloring_free(struct SdColoring *c);

/**
 * Run the discrepancy boost on `g` under `coloring`.
 *
 * # Safety
 * `g` and `coloring` must be live handles; `out` valid for writes.
 */
enum SdStatus sd_boost(const struct SdGraph *g,
                       const struct SdColoring *coloring,
                       double delta,
                       double alpha,
                       uint64_t seed,
                       struct SdBoostResult *out);

/**
 * Solution of `rho = exp(-c (1 - rho))` in `[0, 1)`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SdStatus sd_rho(double c, double tol, double *out);

/**
 * # Safety
 * `g` must be a live handle; `out` valid for writes.
 */
enum SdStatus sd_is_three_connected(const struct SdGraph *g, bool *out);

/**
 * Exact separation number; only small graphs are accepted.
 *
 * # Safety
 * `g` must be a live handle; `out` valid for writes.
 */
enum SdStatus sd_separation_number_exact(const struct SdGraph *g, size_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPANDISC_H */
