#ifndef MRE_FFI_H
#define MRE_FFI_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Largest ensemble an [`MreOptResult`] can hold.
 */
#define MRE_MAX_ENSEMBLE 8

typedef enum MreStatus {
  MRE_STATUS_OK = 0,
  MRE_STATUS_NULL_POINTER = 1,
  MRE_STATUS_INVALID_ARGUMENT = 2,
  MRE_STATUS_INVALID_STATE = 3,
  MRE_STATUS_PANIC = 4,
} MreStatus;

/**
 * A validated two-qubit density matrix.
 */
typedef struct MreState MreState;

/**
 * Search settings. `ensemble_size = 0` picks the default size.
 */
typedef struct MreOptimizerConfig {
  uint32_t restarts;
  uint32_t max_iterations;
  uint32_t ensemble_size;
  double tolerance;
  uint64_t seed;
} MreOptimizerConfig;

/**
 * Outcome of [`mre_optimize`]. Only the first `ensemble_size` rows of
 * `weights` and the amplitude arrays are meaningful.
 */
typedef struct MreOptResult {
  double best_value;
  double seed_value;
  uint64_t evaluations;
  bool converged;
  uint32_t ensemble_size;
  double weights[MRE_MAX_ENSEMBLE];
  double amplitudes_re[MRE_MAX_ENSEMBLE][4];
  double amplitudes_im[MRE_MAX_ENSEMBLE][4];
} MreOptResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a state from a row-major 4x4 matrix. `im` may be null for a real matrix.
 *
 * # Safety
 * `re` (and `im` unless null) must point to 16 doubles; `out` must be writable.
 */
enum MreStatus mre_state_from_matrix(const double *re, const double *im, struct MreState **out);

/**
 * Builds `|psi><psi|` from four amplitudes in the order `|00>, |01>, |10>, |11>`.
 * `im` may be null.
 *
 * # Safety
 * `re` (and `im` unless null) must point to 4 doubles; `out` must be writable.
 */
enum MreStatus mre_state_from_pure(const double *re, const double *im, struct MreState **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum MreStatus mre_state_werner(double fidelity, struct MreState **out);

/**
 * `b` weights the Bell states `Phi+, Phi-, Psi+, Psi-`; `c` weights `|00>, |01>, |10>, |11>`.
 *
 * # Safety
 * `b` and `c` must point to 4 doubles each; `out` must be writable.
 */
enum MreStatus mre_state_ext_werner(const double *b, const double *c, struct MreState **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `state` must be null or a handle not yet freed.
 */
void mre_state_free(struct MreState *state);

/**
 * Copies the matrix out in row-major order.
 *
 * # Safety
 * `s` must be a live handle; `re` and `im` must have room for 16 doubles.
 */
enum MreStatus mre_state_matrix(const struct MreState *s, double *re, double *im);

/**
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum MreStatus mre_von_neumann_entropy(const struct MreState *s, double *out);

/**
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum MreStatus mre_concurrence(const struct MreState *s, double *out);

/**
 * Entanglement of formation from the Wootters concurrence.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum MreStatus mre_ef_wootters(const struct MreState *s, double *out);

/**
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum MreStatus mre_ppt_separable(const struct MreState *s, bool *out);

struct MreOptimizerConfig mre_optimizer_config_default(void);

/**
 * Minimizes the MRE objective over ensembles of the state. A null `cfg`
 * uses [`mre_optimizer_config_default`].
 *
 * # Safety
 * `s` must be a live handle; `cfg` null or readable; `out` writable.
 */
enum MreStatus mre_optimize(const struct MreState *s,
                            const struct MreOptimizerConfig *cfg,
                            struct MreOptResult *out);

/**
 * Upper bound on the relative entropy of entanglement from a search over
 * separable states. A null `cfg` uses the defaults.
 *
 * # Safety
 * `s` must be a live handle; `cfg` null or readable; `out` writable.
 */
enum MreStatus mre_re_upper_bound(const struct MreState *s,
                                  const struct MreOptimizerConfig *cfg,
                                  double *out);

/**
 * Closed-form MRE of the Werner state with fidelity `F`.
 *
 * # Safety
 * `out` must be writable.
 */
enum MreStatus mre_werner_mre(double fidelity, double *out);

/**
 * Message for the last failed call on this thread, or an empty string.
 * The pointer stays valid until the next call into this library on the
 * same thread.
 */
const char *mre_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MRE_FFI_H */
