#ifndef STATDIST_H
#define STATDIST_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

/**
 * Result code of every fallible call.
 */
typedef enum StatdistStatus {
  STATDIST_STATUS_OK = 0,
  /**
   * Null pointer, bad length or non-UTF-8 string.
   */
  STATDIST_STATUS_INVALID_ARGUMENT = 1,
  /**
   * The inputs violate a precondition.
   */
  STATDIST_STATUS_VALIDATION = 2,
  /**
   * The computation hit a singular or non-identifiable case.
   */
  STATDIST_STATUS_NUMERIC = 3,
  /**
   * An internal panic was caught at the boundary.
   */
  STATDIST_STATUS_PANIC = 4,
} StatdistStatus;

/**
 * A cos² channel bank.
 */
typedef struct StatdistBank StatdistBank;

/**
 * An orthonormal analyzer basis.
 */
typedef struct StatdistBasis StatdistBasis;

/**
 * A response law `p(θ)`.
 */
typedef struct StatdistLaw StatdistLaw;

/**
 * A normalized pure state.
 */
typedef struct StatdistState StatdistState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread. Empty after a
 * successful call. Valid until the next call on the same thread.
 */
const char *statdist_last_error(void);

/**
 * The `cos²θ` law on `[0, π/2]`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum StatdistStatus statdist_law_cos2(struct StatdistLaw **out);

/**
 * Law from a spec string: `cos2`, `cos2:<w>` or `table:<path>`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string and `out` a valid pointer.
 */
enum StatdistStatus statdist_law_from_spec(const char *spec, struct StatdistLaw **out);

/**
 * Piecewise-linear law through `len` samples `(thetas[i], probs[i])`.
 *
 * # Safety
 * `thetas` and `probs` must point to `len` doubles; `out` must be valid.
 */
enum StatdistStatus statdist_law_tabulated(const double *thetas,
                                           const double *probs,
                                           size_t len,
                                           struct StatdistLaw **out);

/**
 * # Safety
 * `law` must come from a `statdist_law_*` constructor, or be null.
 */
void statdist_law_free(struct StatdistLaw *law);

/**
 * `p(θ)`.
 *
 * # Safety
 * `law` and `out` must be valid pointers.
 */
enum StatdistStatus statdist_probability(const struct StatdistLaw *law, double theta, double *out);

/**
 * Statistical distance between `theta1` and `theta2` by quadrature.
 *
 * # Safety
 * `law` and `out` must be valid pointers.
 */
enum StatdistStatus statdist_distance(const struct StatdistLaw *law,
                                      double theta1,
                                      double theta2,
                                      double *out);

/**
 * Statistical distance from the closed form.
 *
 * # Safety
 * `law` and `out` must be valid pointers.
 */
enum StatdistStatus statdist_closed_form_distance(const struct StatdistLaw *law,
                                                  double theta1,
                                                  double theta2,
                                                  double *out);

/**
 * Number of orientations between `theta1` and `theta2` distinguishable in
 * `n` trials.
 *
 * # Safety
 * `law` and `out` must be valid pointers.
 */
enum StatdistStatus statdist_count_distinguishable(const struct StatdistLaw *law,
                                                   double theta1,
                                                   double theta2,
                                                   uint64_t n,
                                                   uint64_t *out);

/**
 * Fisher information per trial at `theta`.
 *
 * # Safety
 * `law` and `out` must be valid pointers.
 */
enum StatdistStatus statdist_fisher_information(const struct StatdistLaw *law,
                                                double theta,
                                                double *out);

/**
 * `W² / ((Δθ²/4)·I)` for the Bernoulli pair at `theta` and `theta + delta`.
 *
 * # Safety
 * `law` and `out` must be valid pointers.
 */
enum StatdistStatus statdist_fisher_limit_ratio(const struct StatdistLaw *law,
                                                double theta,
                                                double delta,
                                                double *out);

/**
 * State with amplitudes `re[i] + i·im[i]`, normalized to within 1e-12.
 *
 * # Safety
 * `re` and `im` must point to `dim` doubles; `out` must be valid.
 */
enum StatdistStatus statdist_state_new(const double *re,
                                       const double *im,
                                       size_t dim,
                                       struct StatdistState **out);

/**
 * Haar-random state, deterministic in `seed`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum StatdistStatus statdist_state_random(size_t dim, uint64_t seed, struct StatdistState **out);

/**
 * # Safety
 * `state` must come from a `statdist_state_*` constructor, or be null.
 */
void statdist_state_free(struct StatdistState *state);

/**
 * `arccos |⟨ψ1, ψ2⟩|`.
 *
 * # Safety
 * All pointers must be valid.
 */
enum StatdistStatus statdist_hilbert_distance(const struct StatdistState *psi1,
                                              const struct StatdistState *psi2,
                                              double *out);

/**
 * Random orthonormal basis, deterministic in `seed`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum StatdistStatus statdist_basis_random(size_t dim, uint64_t seed, struct StatdistBasis **out);

/**
 * The standard basis of dimension `dim`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum StatdistStatus statdist_basis_computational(size_t dim, struct StatdistBasis **out);

/**
 * # Safety
 * `basis` must come from a `statdist_basis_*` constructor, or be null.
 */
void statdist_basis_free(struct StatdistBasis *basis);

/**
 * Statistical distance between the outcome distributions of `basis`.
 *
 * # Safety
 * All pointers must be valid.
 */
enum StatdistStatus statdist_device_distance(const struct StatdistBasis *basis,
                                             const struct StatdistState *psi1,
                                             const struct StatdistState *psi2,
                                             double *out);

/**
 * Best analyzer distance over both optimization routes. `converged` is set
 * to 1 when the numeric route met its step tolerance, else 0; it may be null.
 *
 * # Safety
 * `psi1`, `psi2` and `d_max` must be valid pointers.
 */
enum StatdistStatus statdist_optimize_basis(const struct StatdistState *psi1,
                                            const struct StatdistState *psi2,
                                            size_t restarts,
                                            uint64_t seed,
                                            double *d_max,
                                            int32_t *converged);

/**
 * Bank of `k` channels centered evenly on `[lo, hi]`. A non-positive
 * `width` selects the default `π/(3·spacing)`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum StatdistStatus statdist_bank_new(size_t k,
                                      double lo,
                                      double hi,
                                      double width,
                                      struct StatdistBank **out);

/**
 * # Safety
 * `bank` must come from `statdist_bank_new`, or be null.
 */
void statdist_bank_free(struct StatdistBank *bank);

/**
 * Number of channels, or 0 for a null bank.
 *
 * # Safety
 * `bank` must be valid or null.
 */
size_t statdist_bank_len(const struct StatdistBank *bank);

/**
 * Writes the `len` activations for `theta` into `out`.
 *
 * # Safety
 * `bank` must be valid and `out` must hold `len` doubles.
 */
enum StatdistStatus statdist_bank_encode(const struct StatdistBank *bank,
                                         double theta,
                                         double *out,
                                         size_t len);

/**
 * Decodes `len` activations back to an orientation.
 *
 * # Safety
 * `bank` and `out` must be valid; `activations` must hold `len` doubles.
 */
enum StatdistStatus statdist_bank_decode(const struct StatdistBank *bank,
                                         const double *activations,
                                         size_t len,
                                         double *out);

/**
 * Bhattacharyya angle between two L1-normalized activation vectors.
 *
 * # Safety
 * `a` and `b` must hold `len` doubles; `out` must be valid.
 */
enum StatdistStatus statdist_channel_similarity(const double *a,
                                                const double *b,
                                                size_t len,
                                                double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STATDIST_H */
