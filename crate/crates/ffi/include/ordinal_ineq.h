#ifndef ORDINAL_INEQ_H
#define ORDINAL_INEQ_H

#include <stddef.h>
#include <stdint.h>

typedef enum OiStatus {
  OI_STATUS_OK = 0,
  OI_STATUS_NULL_POINTER = 1,
  OI_STATUS_INVALID_DIMENSION = 2,
  OI_STATUS_DIMENSION_MISMATCH = 3,
  OI_STATUS_DOMAIN = 4,
  OI_STATUS_INVALID_PROBABILITIES = 5,
  OI_STATUS_INSUFFICIENT_DRAWS = 6,
  OI_STATUS_DEGENERATE_SAMPLE = 7,
  OI_STATUS_CONFIG = 8,
  OI_STATUS_IO = 9,
  OI_STATUS_PANIC = 10,
} OiStatus;

typedef enum OiOutcome {
  OI_OUTCOME_NEITHER = 0,
  OI_OUTCOME_X_DOMINATES = 1,
  OI_OUTCOME_Y_DOMINATES = 2,
} OiOutcome;

typedef enum OiCriterion {
  OI_CRITERION_FSD = 0,
  OI_CRITERION_RESTRICTED_FSD = 1,
  OI_CRITERION_GLD = 2,
} OiCriterion;

typedef enum OiIndex {
  OI_INDEX_HEADCOUNT = 0,
  OI_INDEX_JENKINS = 1,
  // Uses the `alpha` argument.
  OI_INDEX_COWELL_FLACHAIRE = 2,
} OiIndex;

// Opaque set of posterior draws.
typedef struct OiDraws OiDraws;

// Opaque probability vector.
typedef struct OiProbVec OiProbVec;

// Posterior summary of one index.
typedef struct OiSummary {
  double mean;
  double sd;
  double q025;
  double median;
  double q975;
} OiSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *oi_version(void);

// Message of the last failed call on this thread; empty if none. Valid
// until the next failing call on the same thread.
const char *oi_last_error_message(void);

// Probability vector from `k` entries that sum to 1 within 1e-6.
//
// # Safety
// `p` must point to `k` doubles; `out` must be writable.
enum OiStatus oi_probvec_new(const double *p, size_t k, struct OiProbVec **out);

// Probability vector from nonnegative weights with a positive sum.
//
// # Safety
// `w` must point to `k` doubles; `out` must be writable.
enum OiStatus oi_probvec_from_weights(const double *w, size_t k, struct OiProbVec **out);

// # Safety
// `v` must come from `oi_probvec_*` and not be freed twice. Null is ignored.
void oi_probvec_free(struct OiProbVec *v);

// Number of categories, or 0 for null.
//
// # Safety
// `v` must be null or a live handle.
size_t oi_probvec_len(const struct OiProbVec *v);

// # Safety
// `v` must be a live handle; `out` must be writable.
enum OiStatus oi_headcount(const struct OiProbVec *v, double *out);

// # Safety
// `v` must be a live handle; `out` must be writable.
enum OiStatus oi_j_index(const struct OiProbVec *v, double *out);

// # Safety
// `v` must be a live handle; `out` must be writable.
enum OiStatus oi_cf_index(const struct OiProbVec *v, double alpha, double *out);

// Generalized Lorenz curve at `u` in [0, 1].
//
// # Safety
// `v` must be a live handle; `out` must be writable.
enum OiStatus oi_gl_eval(const struct OiProbVec *v, double u, double *out);

// # Safety
// `x`, `y` must be live handles; `out` must be writable.
enum OiStatus oi_fsd_compare(const struct OiProbVec *x,
                             const struct OiProbVec *y,
                             enum OiOutcome *out);

// # Safety
// `x`, `y` must be live handles; `out` must be writable.
enum OiStatus oi_restricted_fsd_compare(const struct OiProbVec *x,
                                        const struct OiProbVec *y,
                                        enum OiOutcome *out);

// GL dominance on the grid `step, 2*step, ...` below 1 (0.01 gives 99 points).
//
// # Safety
// `x`, `y` must be live handles; `out` must be writable.
enum OiStatus oi_gld_compare(const struct OiProbVec *x,
                             const struct OiProbVec *y,
                             double grid_step,
                             enum OiOutcome *out);

// `m` draws from Dirichlet(counts + prior). A null `prior` means
// Dirichlet(1, ..., 1).
//
// # Safety
// `counts` must point to `k` values, `prior` to `k` doubles or be null;
// `out` must be writable.
enum OiStatus oi_conjugate_draws(const uint64_t *counts,
                                 size_t k,
                                 const double *prior,
                                 size_t m,
                                 uint64_t seed,
                                 struct OiDraws **out);

// `m` weighted Bayesian bootstrap draws over `n` records with 1-based
// categories in `1..=k`.
//
// # Safety
// `categories` and `weights` must point to `n` values; `out` must be writable.
enum OiStatus oi_weighted_bootstrap_draws(const uint32_t *categories,
                                          const double *weights,
                                          size_t n,
                                          size_t k,
                                          size_t m,
                                          uint64_t seed,
                                          struct OiDraws **out);

// # Safety
// `d` must come from a draws constructor and not be freed twice. Null is ignored.
void oi_draws_free(struct OiDraws *d);

// Number of draws, or 0 for null.
//
// # Safety
// `d` must be null or a live handle.
size_t oi_draws_count(const struct OiDraws *d);

// Number of categories per draw, or 0 for null.
//
// # Safety
// `d` must be null or a live handle.
size_t oi_draws_categories(const struct OiDraws *d);

// Copy draw `index` into `out`, which holds `len` doubles (`len` must equal
// the category count).
//
// # Safety
// `d` must be a live handle; `out` must have room for `len` doubles.
enum OiStatus oi_draws_row(const struct OiDraws *d, size_t index, double *out, size_t len);

// Writes `[prob_x, prob_y, prob_none]` to `out`. `grid_step` is used by GLD
// only.
//
// # Safety
// `x`, `y` must be live handles; `out` must have room for 3 doubles.
enum OiStatus oi_dominance_probabilities(const struct OiDraws *x,
                                         const struct OiDraws *y,
                                         enum OiCriterion criterion,
                                         double grid_step,
                                         double *out);

// Posterior summary of an index over the draws. `alpha` is read for
// `CowellFlachaire` only.
//
// # Safety
// `d` must be a live handle; `out` must be writable.
enum OiStatus oi_index_summary(const struct OiDraws *d,
                               enum OiIndex index,
                               double alpha,
                               struct OiSummary *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ORDINAL_INEQ_H */
