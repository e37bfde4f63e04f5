#ifndef STRESS_GAUGE_H
#define STRESS_GAUGE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SgDistance {
  SG_DISTANCE_EUCLIDEAN = 0,
  SG_DISTANCE_MANHATTAN = 1,
  SG_DISTANCE_COSINE = 2,
} SgDistance;

typedef enum SgMetric {
  SG_METRIC_RAW_STRESS = 0,
  SG_METRIC_NORMALIZED_STRESS = 1,
  SG_METRIC_SHEPARD_GOODNESS = 2,
  SG_METRIC_NON_METRIC_STRESS = 3,
  SG_METRIC_SCALE_NORMALIZED_STRESS = 4,
} SgMetric;

typedef enum SgStatus {
  SG_STATUS_OK = 0,
  /**
   * Bad argument value or unsupported request.
   */
  SG_STATUS_INVALID_ARGUMENT = 1,
  /**
   * Malformed or mismatched input data.
   */
  SG_STATUS_DATA_ERROR = 2,
  /**
   * Degenerate input or optimizer failure.
   */
  SG_STATUS_NUMERICAL_ERROR = 3,
  SG_STATUS_NULL_POINTER = 4,
  /**
   * A Rust panic was caught at the boundary.
   */
  SG_STATUS_INTERNAL = 5,
} SgStatus;

typedef enum SgTechnique {
  SG_TECHNIQUE_CLASSICAL_MDS = 0,
  SG_TECHNIQUE_SMACOF_MDS = 1,
  SG_TECHNIQUE_TSNE = 2,
  SG_TECHNIQUE_RANDOM = 3,
} SgTechnique;

/**
 * Opaque condensed distance vector.
 */
typedef struct SgDistances SgDistances;

/**
 * Opaque row-major embedding.
 */
typedef struct SgEmbedding SgEmbedding;

typedef struct SgEmbedConfig {
  enum SgTechnique technique;
  uint64_t seed;
  size_t target_dim;
  double tsne_perplexity;
  size_t tsne_iters;
  size_t smacof_max_iters;
  double smacof_rel_tol;
  /**
   * Start SMACOF from a random layout instead of classical MDS.
   */
  bool smacof_random_init;
  enum SgDistance distance;
} SgEmbedConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the next call.
 */
const char *sg_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *sg_version(void);

/**
 * Pairwise distances of `rows × cols` row-major points.
 *
 * # Safety
 * `values` must point to `rows * cols` doubles and `out` to writable storage.
 */
enum SgStatus sg_distances_from_points(const double *values,
                                       size_t rows,
                                       size_t cols,
                                       enum SgDistance distance,
                                       struct SgDistances **out);

/**
 * Wraps an existing condensed vector (pairs `i < j` in row order).
 *
 * # Safety
 * `values` must point to `len` doubles and `out` to writable storage.
 */
enum SgStatus sg_distances_from_condensed(const double *values,
                                          size_t len,
                                          struct SgDistances **out);

/**
 * Number of pairs; 0 for a null handle.
 *
 * # Safety
 * `d` must be null or a live handle.
 */
size_t sg_distances_len(const struct SgDistances *d);

/**
 * # Safety
 * `d` must be null or a live handle.
 */
size_t sg_distances_n_points(const struct SgDistances *d);

/**
 * Copies the condensed values into `out`, which must hold exactly `len` doubles.
 *
 * # Safety
 * `d` must be a live handle and `out` must point to `len` writable doubles.
 */
enum SgStatus sg_distances_copy(const struct SgDistances *d, double *out, size_t len);

/**
 * # Safety
 * `d` must be null or a handle not yet freed.
 */
void sg_distances_free(struct SgDistances *d);

/**
 * Evaluates one quality metric of `low` against `high`.
 *
 * # Safety
 * Handles must be live and `out` writable.
 */
enum SgStatus sg_metric(enum SgMetric metric,
                        const struct SgDistances *high,
                        const struct SgDistances *low,
                        bool kruskal_sqrt,
                        double *out);

/**
 * Closed-form optimal scale. `clamped` (nullable) reports a non-positive minimizer.
 *
 * # Safety
 * Handles must be live, `alpha` writable, `clamped` null or writable.
 */
enum SgStatus sg_optimal_scale(const struct SgDistances *high,
                               const struct SgDistances *low,
                               double *alpha,
                               bool *clamped);

/**
 * Evaluates a scale-sensitive metric at each of `n` scale factors.
 *
 * # Safety
 * Handles must be live; `alphas` and `values` must each hold `n` doubles.
 */
enum SgStatus sg_stress_scale_curve(enum SgMetric metric,
                                    const struct SgDistances *high,
                                    const struct SgDistances *low,
                                    const double *alphas,
                                    size_t n,
                                    double *values);

/**
 * Weighted isotonic (non-decreasing) regression. `weights` may be null for unit weights.
 *
 * # Safety
 * `y` and `fitted` must hold `n` doubles, `weights` null or `n` doubles, `sse` null or writable.
 */
enum SgStatus sg_isotonic_fit(const double *y,
                              const double *weights,
                              size_t n,
                              double *fitted,
                              double *sse);

/**
 * Spearman rank correlation with average ranks for ties.
 *
 * # Safety
 * `x` and `y` must hold `n` doubles and `out` be writable.
 */
enum SgStatus sg_spearman(const double *x, const double *y, size_t n, double *out);

/**
 * Default embedder settings for `technique`.
 */
struct SgEmbedConfig sg_embed_config_default(enum SgTechnique technique);

/**
 * Embeds `rows × cols` row-major points.
 *
 * # Safety
 * `values` must hold `rows * cols` doubles, `config` be readable, `out` writable.
 */
enum SgStatus sg_embed(const double *values,
                       size_t rows,
                       size_t cols,
                       const struct SgEmbedConfig *config,
                       struct SgEmbedding **out);

/**
 * Wraps caller-provided embedding coordinates.
 *
 * # Safety
 * `values` must hold `rows * cols` doubles and `out` be writable.
 */
enum SgStatus sg_embedding_from_points(const double *values,
                                       size_t rows,
                                       size_t cols,
                                       struct SgEmbedding **out);

/**
 * # Safety
 * `e` must be null or a live handle.
 */
size_t sg_embedding_rows(const struct SgEmbedding *e);

/**
 * # Safety
 * `e` must be null or a live handle.
 */
size_t sg_embedding_cols(const struct SgEmbedding *e);

/**
 * Copies row-major coordinates into `out`, which must hold exactly `rows * cols` doubles.
 *
 * # Safety
 * `e` must be a live handle and `out` must point to `len` writable doubles.
 */
enum SgStatus sg_embedding_copy(const struct SgEmbedding *e, double *out, size_t len);

/**
 * Pairwise distances between embedded points.
 *
 * # Safety
 * `e` must be a live handle and `out` writable.
 */
enum SgStatus sg_embedding_distances(const struct SgEmbedding *e,
                                     enum SgDistance distance,
                                     struct SgDistances **out);

/**
 * # Safety
 * `e` must be null or a handle not yet freed.
 */
void sg_embedding_free(struct SgEmbedding *e);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STRESS_GAUGE_H */
