#ifndef PULSEGLIDE_H
#define PULSEGLIDE_H

/* Generated by cbindgen from the pulseglide-ffi crate; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of a C-ABI call.
typedef enum PgStatus {
  // Success.
  PgOk = 0,
  // A required pointer argument was null.
  PgNullPointer = 1,
  // An argument was outside its domain.
  PgInvalidArgument = 2,
  // A string argument was not valid UTF-8 or not valid JSON.
  PgBadInput = 3,
  // The requested critical point does not exist in the search window.
  PgNotPngCapable = 4,
  // Integration or root finding failed numerically.
  PgNumericalFailure = 5,
} PgStatus;

// Opaque parameter set: vehicle plus fuel map.
typedef struct PgModel PgModel;

// Steady cruise equilibrium.
typedef struct PgEquilibrium {
  // Cruise speed (m/s).
  double speed_mps;
  // Traction force balancing drag and rolling resistance (N).
  double force_n;
  // Velocity costate at the equilibrium (g/m).
  double lambda1;
  // Speed weight making this speed stationary (g/m).
  double weight_c_g_per_m;
  // Time-averaged cost of steady cruising (g/s).
  double steady_cost_g_per_s;
} PgEquilibrium;

// Critical input weight at one speed.
typedef struct PgCritical {
  // Cruise speed (m/s).
  double speed_mps;
  // Largest input weight with an oscillatory linearization (g s/N^2).
  double r_crit;
  // Mode frequency at the critical weight (rad/s).
  double omega_rad_s;
  // Cycle period at the critical weight (s).
  double period_s;
} PgCritical;

// One-period evaluation of a Fourier decision.
typedef struct PgEvaluation {
  // Time-averaged total cost (g/s).
  double total_g_per_s;
  // Time-averaged fuel rate (g/s).
  double fuel_g_per_s;
  // Speed reward term (g/s).
  double speed_g_per_s;
  // Input effort term (g/s).
  double input_g_per_s;
  // Velocity gap over the period (m/s).
  double r_x1_mps;
  // Force gap over the period (N).
  double r_x2_n;
  // Smallest force sample (N).
  double min_x2_n;
} PgEvaluation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Create a model with the built-in passenger-car defaults. Never fails.
// Free with `pg_model_free`.
struct PgModel *pg_model_new_default(void);

// Create a model from a JSON parameter document (same schema as the CLI's
// --config file). On success writes the handle to `out`.
//
// # Safety
// `json` must be a valid NUL-terminated string and `out` a valid pointer.
enum PgStatus pg_model_new_from_json(const char *json, struct PgModel **out);

// Destroy a model created by the constructors. Null is a no-op.
//
// # Safety
// `model` must be null or a pointer returned by a constructor, not yet
// freed.
void pg_model_free(struct PgModel *model);

// Steady cruise equilibrium at `speed_mps`.
//
// # Safety
// `model` must be a live model handle and `out` a valid pointer.
enum PgStatus pg_equilibrium(const struct PgModel *model,
                             double speed_mps,
                             struct PgEquilibrium *out);

// Eigenvalues of the linearized optimality system at (`speed_mps`, `r`).
// Writes four real and four imaginary parts (largest imaginary part first)
// and the mode class: 0 oscillatory, 1 unstable, 2 degenerate.
//
// # Safety
// `model` must be a live handle; `re_out` and `im_out` must point to at
// least four f64 each; `class_out` must be a valid pointer.
enum PgStatus pg_linear_modes(const struct PgModel *model,
                              double speed_mps,
                              double r,
                              double *re_out,
                              double *im_out,
                              int *class_out);

// Critical input weight at `speed_mps` over the default search window.
//
// # Safety
// `model` must be a live handle and `out` a valid pointer.
enum PgStatus pg_find_r_crit(const struct PgModel *model, double speed_mps, struct PgCritical *out);

// Speed above which no input weight gives an oscillatory linearization.
//
// # Safety
// `model` must be a live handle and `out` a valid pointer.
enum PgStatus pg_find_v_crit(const struct PgModel *model, double *out);

// Integrate one period of the dynamics under a Fourier input and fill the
// caller's buffers with `steps + 1` samples of time, velocity, and force.
// Any output pointer may be null to skip that series.
//
// # Safety
// `model` must be a live handle; `a` and `b` must point to `harmonics`
// coefficients each; non-null output buffers must hold `steps + 1` f64.
enum PgStatus pg_simulate(const struct PgModel *model,
                          double x1_0,
                          double x2_0,
                          double omega,
                          const double *a,
                          const double *b,
                          size_t harmonics,
                          size_t steps,
                          double *t_out,
                          double *x1_out,
                          double *x2_out);

// Evaluate the time-averaged cost and periodicity gaps of a Fourier
// decision under speed weight `c` and input weight `r`.
//
// # Safety
// `model` must be a live handle; `a` and `b` must point to `harmonics`
// coefficients each; `out` must be a valid pointer.
enum PgStatus pg_evaluate(const struct PgModel *model,
                          double x1_0,
                          double x2_0,
                          double omega,
                          const double *a,
                          const double *b,
                          size_t harmonics,
                          double c,
                          double r,
                          size_t steps,
                          struct PgEvaluation *out);

// Instantaneous fuel rate (g/s) at a velocity and force sample.
//
// # Safety
// `model` must be a live handle and `out` a valid pointer.
enum PgStatus pg_fuel_rate(const struct PgModel *model, double x1_mps, double x2_n, double *out);

// Static description of a status code. Never null.
const char *pg_status_message(enum PgStatus status);

// Library version as a static NUL-terminated string.
const char *pg_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PULSEGLIDE_H */
