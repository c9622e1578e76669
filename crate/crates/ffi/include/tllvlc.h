#ifndef TLLVLC_H
#define TLLVLC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every call.
typedef enum TllStatus {
  TLL_STATUS_OK = 0,
  TLL_STATUS_NULL_POINTER = 1,
  TLL_STATUS_INVALID_ARGUMENT = 2,
  TLL_STATUS_CONFIG_ERROR = 3,
  // No lens setting realises the request (tilt bounds, critical angle, voltage limit).
  TLL_STATUS_INFEASIBLE = 4,
  // Argument outside the domain of a model formula.
  TLL_STATUS_DOMAIN_ERROR = 5,
  // The evaluator does not cover this scheme.
  TLL_STATUS_UNSUPPORTED = 6,
  // A Rust panic was caught at the boundary.
  TLL_STATUS_PANIC = 7,
} TllStatus;

// Receiver schemes, as accepted by the `scheme` arguments.
typedef enum TllScheme {
  TLL_SCHEME_BSR = 0,
  TLL_SCHEME_VULO = 1,
  TLL_SCHEME_FIXED_LENS = 2,
  TLL_SCHEME_NO_LENS = 3,
} TllScheme;

// Opaque parameter set.
typedef struct TllParams TllParams;

// Receiver position and orientation.
typedef struct TllPose {
  double r;
  double theta;
  double theta_r;
  double phi_r;
} TllPose;

// Outage estimate. `std_error` is NaN for deterministic evaluators;
// `converged` is 1 or 0 for quadrature and −1 otherwise.
typedef struct TllOutage {
  double p_out;
  double std_error;
  uint64_t samples;
  int32_t converged;
  uint32_t warnings;
} TllOutage;

// Surface tilt, contact angles and wall voltages, walls ordered
// x-left, x-right, y-left, y-right.
typedef struct TllLensState {
  double psi_x;
  double psi_y;
  double contact[4];
  double voltage[4];
} TllLensState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *tll_version(void);

// Message for the last failed call on this thread; empty after a success.
// The pointer stays valid until the next call on the same thread.
const char *tll_last_error_message(void);

// New handle with the default parameters, or null on allocation failure.
struct TllParams *tll_params_new(void);

// Parse config text (`key = value` lines) into a new handle.
//
// # Safety
// `config` must be a NUL-terminated string and `out` a writable pointer.
enum TllStatus tll_params_from_config(const char *config, struct TllParams **out);

// Apply config lines to an existing handle; on error it is unchanged.
//
// # Safety
// `params` must come from this library; `config` must be NUL-terminated.
enum TllStatus tll_params_apply(struct TllParams *params, const char *config);

// Release a handle. Null is ignored.
//
// # Safety
// `params` must come from this library and not be used afterwards.
void tll_params_free(struct TllParams *params);

// Check the parameter set as a whole.
//
// # Safety
// `params` must come from this library.
enum TllStatus tll_params_validate(const struct TllParams *params);

// SNR of `scheme` at `pose`.
//
// # Safety
// `params` must come from this library; `pose` and `out` must be valid.
enum TllStatus tll_snr(const struct TllParams *params,
                       uint32_t scheme,
                       const struct TllPose *pose,
                       double *out);

// Analytic outage: exact for BSR, the convolution formula for VULO.
// Other schemes report `Unsupported`.
//
// # Safety
// `params` must come from this library; `out` must be writable.
enum TllStatus tll_outage_closed(const struct TllParams *params,
                                 uint32_t scheme,
                                 double gamma_th,
                                 struct TllOutage *out);

// VULO outage from the distribution-chain approximation.
//
// # Safety
// `params` must come from this library; `out` must be writable.
enum TllStatus tll_outage_vulo_chain(const struct TllParams *params,
                                     double gamma_th,
                                     struct TllOutage *out);

// Outage by deterministic quadrature over position and orientation.
//
// # Safety
// `params` must come from this library; `out` must be writable.
enum TllStatus tll_outage_quadrature(const struct TllParams *params,
                                     uint32_t scheme,
                                     double gamma_th,
                                     struct TllOutage *out);

// Monte Carlo outage over `samples` poses of the stream keyed by `seed`.
//
// # Safety
// `params` must come from this library; `out` must be writable.
enum TllStatus tll_outage_monte_carlo(const struct TllParams *params,
                                      uint32_t scheme,
                                      double gamma_th,
                                      uint64_t samples,
                                      uint64_t seed,
                                      struct TllOutage *out);

// Lens setting that aligns the refracted ray with the receiver axis,
// within the configured tilt bounds and voltage limit.
//
// # Safety
// `params` must come from this library; `pose` and `out` must be valid.
enum TllStatus tll_bsr_solve(const struct TllParams *params,
                             const struct TllPose *pose,
                             struct TllLensState *out);

// Contact angles and voltages holding the surface at `(psi_x, psi_y)`.
//
// # Safety
// `params` must come from this library; `out` must be writable.
enum TllStatus tll_lens_state(const struct TllParams *params,
                              double psi_x,
                              double psi_y,
                              struct TllLensState *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TLLVLC_H */
