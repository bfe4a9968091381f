#ifndef TRUSTDYN_H
#define TRUSTDYN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TdCase {
  TD_CASE_BOUNDARY = 0,
  TD_CASE_CASE1 = 1,
  TD_CASE_CASE2 = 2,
  TD_CASE_CASE3 = 3,
  TD_CASE_CASE4 = 4,
  TD_CASE_CASE5 = 5,
  TD_CASE_CASE6 = 6,
} TdCase;

typedef enum TdLabel {
  TD_LABEL_MU = 0,
  TD_LABEL_MT = 1,
  TD_LABEL_PU = 2,
  TD_LABEL_PT = 3,
  TD_LABEL_PTU = 4,
  TD_LABEL_PMU = 5,
  TD_LABEL_PMT = 6,
  TD_LABEL_INTERIOR = 7,
} TdLabel;

typedef enum TdStability {
  TD_STABILITY_STABLE = 0,
  TD_STABILITY_UNSTABLE = 1,
  TD_STABILITY_MARGINAL = 2,
} TdStability;

// Result code of every fallible call.
typedef enum TdStatus {
  TD_STATUS_OK = 0,
  TD_STATUS_NULL_POINTER = 1,
  TD_STATUS_INVALID_PARAMS = 2,
  TD_STATUS_INVALID_STATE = 3,
  TD_STATUS_INVALID_CONFIG = 4,
  TD_STATUS_INDEX_OUT_OF_RANGE = 5,
  TD_STATUS_NUMERICAL_FAILURE = 6,
  TD_STATUS_PANIC = 7,
} TdStatus;

// Opaque list of fixed points with their stability analysis.
typedef struct TdEquilibria TdEquilibria;

// Opaque validated parameter set.
typedef struct TdParams TdParams;

// Opaque integrated trajectory.
typedef struct TdTrajectory TdTrajectory;

typedef struct TdPayoffs {
  double f_p;
  double f_m;
  double f_t;
  double f_u;
} TdPayoffs;

typedef struct TdVector {
  double dx_i;
  double dx_t;
} TdVector;

typedef struct TdThresholds {
  double alpha_star;
  double lambda_low;
  double lambda_high;
} TdThresholds;

typedef struct TdEquilibrium {
  enum TdLabel label;
  double x_i;
  double x_t;
  double eig_re[2];
  double eig_im[2];
  enum TdStability stability;
} TdEquilibrium;

typedef struct TdIntegratorConfig {
  double step;
  double t_max;
  double convergence_eps;
  double clamp_eps;
  uint64_t sample_every;
} TdIntegratorConfig;

typedef struct TdSample {
  double t;
  double x_i;
  double x_t;
} TdSample;

typedef struct TdBasinResult {
  double fraction;
  double area;
  uint64_t attracted;
  uint64_t unresolved;
  uint64_t total;
} TdBasinResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copy the last error message of this thread into `buf` as a
// NUL-terminated string, truncating to `len - 1` bytes. Returns the full
// message length excluding the terminator. `buf` may be null to query the
// length.
size_t td_last_error_message(char *buf, size_t len);

// Library version as a static NUL-terminated string.
const char *td_version(void);

// Validate parameters and allocate a handle.
enum TdStatus td_params_new(uint32_t n,
                            double alpha,
                            double lambda,
                            double r,
                            double r_t,
                            double t_v,
                            struct TdParams **out);

void td_params_free(struct TdParams *params);

enum TdStatus td_expected_payoffs(const struct TdParams *params,
                                  double x_i,
                                  double x_t,
                                  struct TdPayoffs *out);

enum TdStatus td_replicator_rhs(const struct TdParams *params,
                                double x_i,
                                double x_t,
                                struct TdVector *out);

enum TdStatus td_thresholds(const struct TdParams *params, struct TdThresholds *out);

enum TdStatus td_classify_regime(const struct TdParams *params, double tol, enum TdCase *out);

// Boundary fixed points, followed by interior ones when
// `include_interior` is true.
enum TdStatus td_equilibria_new(const struct TdParams *params,
                                double tol,
                                bool include_interior,
                                struct TdEquilibria **out);

size_t td_equilibria_len(const struct TdEquilibria *table);

enum TdStatus td_equilibria_get(const struct TdEquilibria *table,
                                size_t index,
                                struct TdEquilibrium *out);

void td_equilibria_free(struct TdEquilibria *table);

// Defaults for single trajectories.
struct TdIntegratorConfig td_integrator_default(void);

// Defaults for basin grids.
struct TdIntegratorConfig td_basin_integrator_default(void);

enum TdStatus td_trajectory_new(const struct TdParams *params,
                                double x_i,
                                double x_t,
                                const struct TdIntegratorConfig *config,
                                struct TdTrajectory **out);

size_t td_trajectory_len(const struct TdTrajectory *traj);

enum TdStatus td_trajectory_get(const struct TdTrajectory *traj,
                                size_t index,
                                struct TdSample *out);

// Final sample and whether the vector field fell below the convergence
// threshold before `t_max`.
enum TdStatus td_trajectory_terminal(const struct TdTrajectory *traj,
                                     struct TdSample *out,
                                     bool *converged);

void td_trajectory_free(struct TdTrajectory *traj);

// Share of a `grid x grid` set of starts attracted to P+T.
enum TdStatus td_basin_fraction(const struct TdParams *params,
                                uint32_t grid,
                                const struct TdIntegratorConfig *config,
                                struct TdBasinResult *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRUSTDYN_H */
