#ifndef LGSIM_H
#define LGSIM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LgRegime {
  LG_REGIME_MARKOVIAN = 0,
  LG_REGIME_NON_MARKOVIAN = 1,
  LG_REGIME_INTERMEDIATE = 2,
  LG_REGIME_UNITARY = 3,
} LgRegime;

typedef enum LgRootFamily {
  LG_ROOT_FAMILY_CONDITION = 0,
  LG_ROOT_FAMILY_SIN_ZERO = 1,
} LgRootFamily;

typedef enum LgStatus {
  LG_STATUS_OK = 0,
  LG_STATUS_NULL_POINTER = 1,
  LG_STATUS_INVALID_PARAMS = 2,
  LG_STATUS_INVALID_TIMES = 3,
  LG_STATUS_INVALID_STATE = 4,
  LG_STATUS_INVALID_BRACKET = 5,
  LG_STATUS_UNSUPPORTED = 6,
  LG_STATUS_BUFFER_TOO_SMALL = 7,
  LG_STATUS_NUMERICAL = 8,
  LG_STATUS_PANIC = 9,
} LgStatus;

/**
 * Opaque channel handle.
 */
typedef struct LgChannel LgChannel;

/**
 * Correlators and LG parameters at t0 = 0, t1 = dt, t2 = 2 dt.
 */
typedef struct LgK3Result {
  double dt;
  double c01;
  double c12;
  double c02;
  double k3;
  double k3_prime;
} LgK3Result;

/**
 * A stationary point of K3 along dt. `nu` is NaN for channels without
 * a dimensionless time.
 */
typedef struct LgRoot {
  enum LgRootFamily family;
  double dt;
  double nu;
  double residual;
  double k3;
  double dk3;
  bool is_maximum;
  bool stationary;
} LgRoot;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Random telegraph noise with coupling `a` and switching rate `gamma`.
 *
 * # Safety
 * `out` must be valid for writing a pointer.
 */
enum LgStatus lg_channel_rtn(double a, double gamma, struct LgChannel **out);

/**
 * Ornstein-Uhlenbeck noise with relaxation rate `big_gamma` and
 * bandwidth `gamma`.
 *
 * # Safety
 * `out` must be valid for writing a pointer.
 */
enum LgStatus lg_channel_oun(double big_gamma, double gamma, struct LgChannel **out);

/**
 * Noise-free precession at frequency `omega`.
 *
 * # Safety
 * `out` must be valid for writing a pointer.
 */
enum LgStatus lg_channel_unitary(double omega, struct LgChannel **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `ch` must come from an `lg_channel_*` constructor and not be used again.
 */
void lg_channel_free(struct LgChannel *ch);

/**
 * Coherence factor of the channel after time `t`.
 *
 * # Safety
 * `ch` must be a live handle and `out` valid for writing.
 */
enum LgStatus lg_channel_decoherence(const struct LgChannel *ch, double t, double *out);

/**
 * # Safety
 * `ch` must be a live handle and `out` valid for writing.
 */
enum LgStatus lg_channel_regime(const struct LgChannel *ch, enum LgRegime *out);

/**
 * Closed-form two-time correlator for 0 <= ti <= tj.
 *
 * # Safety
 * `ch` must be a live handle and `out` valid for writing.
 */
enum LgStatus lg_correlator_closed(const struct LgChannel *ch,
                                   double theta,
                                   double ti,
                                   double tj,
                                   double *out);

/**
 * Two-time correlator from the measurement chain, starting from the
 * state with Bloch vector `bloch[0..3]`.
 *
 * # Safety
 * `ch` must be a live handle, `bloch` must point to three doubles and
 * `out` must be valid for writing.
 */
enum LgStatus lg_correlator_chain(const struct LgChannel *ch,
                                  double theta,
                                  double phi,
                                  const double *bloch,
                                  double ti,
                                  double tj,
                                  double *out);

/**
 * K3 and K3' for equally spaced measurements separated by `dt` > 0.
 *
 * # Safety
 * `ch` must be a live handle and `out` valid for writing.
 */
enum LgStatus lg_k3(const struct LgChannel *ch,
                    double theta,
                    double phi,
                    double dt,
                    struct LgK3Result *out);

/**
 * 2 cos(omega dt) - cos(2 omega dt).
 */
double lg_k3_unitary(double omega, double dt);

/**
 * Stationary points of K3 at theta = pi/2 with dt in (lo, hi].
 *
 * Writes up to `capacity` roots to `roots` and the total count to
 * `count`. Returns `LG_STATUS_BUFFER_TOO_SMALL` when the count exceeds
 * the capacity; call again with a larger buffer. `roots` may be null
 * when `capacity` is 0.
 *
 * # Safety
 * `ch` must be a live handle, `roots` valid for `capacity` writes and
 * `count` valid for writing.
 */
enum LgStatus lg_solve_extremum(const struct LgChannel *ch,
                                double lo,
                                double hi,
                                struct LgRoot *roots,
                                size_t capacity,
                                size_t *count);

/**
 * Message for the most recent failure on this thread, or "". The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *lg_last_error_message(void);

/**
 * Static name of a status code.
 */
const char *lg_status_name(enum LgStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LGSIM_H */
