#ifndef RADNER_RADNER_H
#define RADNER_RADNER_H

/* C interface to the equilibrium solver, verifier, Monte Carlo engine and
 * welfare analysis. Every function returns a radner_status; on failure the
 * thread-local radner_last_error() carries a description. Handles are opaque
 * and must be released with the matching _free function. */

#include <stddef.h>
#include <stdint.h>

#if defined(RADNER_BUILDING_LIBRARY)
#define RADNER_API __attribute__((visibility("default")))
#else
#define RADNER_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum radner_status {
  RADNER_OK = 0,
  /* Result produced, but an exponent hit the clamp of +-700. */
  RADNER_WARN_SATURATED = 1,
  RADNER_E_INVALID_ARGUMENT = -1,
  RADNER_E_CONFIG_INVALID = -2,
  RADNER_E_STEP_SIZE_UNDERFLOW = -3,
  RADNER_E_NON_FINITE_RHS = -4,
  RADNER_E_OUT_OF_DOMAIN = -5,
  RADNER_E_RESIDUAL_EXCEEDS_TOLERANCE = -6,
  RADNER_E_IDENTITY_VIOLATION = -7,
  RADNER_E_CLEARING_VIOLATION = -8,
  RADNER_E_BOUND_VIOLATION = -9,
  RADNER_E_INVALID_MEASURE = -10,
  RADNER_E_HYPOTHESIS_VIOLATION = -11,
  RADNER_E_INTERNAL = -99
} radner_status;

typedef enum radner_model_kind { RADNER_ENDOGENOUS = 0, RADNER_EXOGENOUS = 1 } radner_model_kind;
typedef enum radner_measure { RADNER_MEASURE_P = 0, RADNER_MEASURE_QHAT = 1 } radner_measure;

typedef struct radner_params {
  int I;
  double a;
  double sigma_D;
  double sigma_Yp;
  double kappa;
  double Sigma;
  double Y0;
  double Yp0;
  double D0;
  /* Initial investor holdings, theta0_len == I. NULL selects the equal
   * split (Sigma - Y0) / I. The array is copied, never retained. */
  const double* theta0;
  size_t theta0_len;
} radner_params;

RADNER_API const char* radner_version(void);
RADNER_API const char* radner_status_name(radner_status status);
RADNER_API const char* radner_last_error(void);

/* Base point I=10, a=1, sigma_D=1, sigma_Yp=10, kappa=5, Sigma=1, Y0=Yp0=D0=0. */
RADNER_API void radner_params_init(radner_params* params);
/* RADNER_E_CONFIG_INVALID lists every violated invariant, separated by "; ". */
RADNER_API radner_status radner_params_validate(const radner_params* params);

/* ---- models ---------------------------------------------------------- */

typedef struct radner_model radner_model;

RADNER_API radner_status radner_model_solve(const radner_params* params, radner_model_kind kind,
                                            double tol, radner_model** out);
RADNER_API void radner_model_free(radner_model* model);

RADNER_API radner_model_kind radner_model_kind_of(const radner_model* model);
/* 15 for the endogenous model (alpha, beta, mu, g1..g33, f1..f33), 9 otherwise. */
RADNER_API size_t radner_model_function_count(const radner_model* model);
RADNER_API const char* radner_model_function_name(const radner_model* model, size_t index);
RADNER_API radner_status radner_model_eval(const radner_model* model, size_t index, double t,
                                           double* value);
RADNER_API radner_status radner_model_eval_rate(const radner_model* model, size_t index,
                                                double t, double* rate);
/* values must hold radner_model_function_count entries. */
RADNER_API radner_status radner_model_eval_all(const radner_model* model, double t,
                                               double* values);
/* Core pair in reversed time s = 1 - t and the constants of z1 < C1 s^2, z2 < C2 s^3. */
RADNER_API radner_status radner_model_core(const radner_model* model, double s, double* z1,
                                           double* z2);
RADNER_API radner_status radner_model_bounds(const radner_model* model, double* c1, double* c2);

RADNER_API radner_status radner_stock_price(const radner_model* model, double t, double D,
                                            double Y, double Yp, double* price);
RADNER_API radner_status radner_investor_strategy(const radner_model* model, double t, double Y,
                                                  double Yp, double* holding);
/* The exogenous noise trader holds Y. */
RADNER_API radner_status radner_tracker_strategy(const radner_model* model, double t, double Y,
                                                 double Yp, double* holding);
/* -exp(-a CE). Returns RADNER_WARN_SATURATED when the exponent was clamped. */
RADNER_API radner_status radner_investor_value(const radner_model* model, double t, double x,
                                               double Y, double Yp, double* value);
/* Endogenous model only. */
RADNER_API radner_status radner_tracker_value(const radner_model* model, double t, double x,
                                              double Y, double Yp, double* value);

/* ---- verification ---------------------------------------------------- */

typedef struct radner_report radner_report;

/* Residual of every coefficient ODE on a uniform grid of [0, 1 - 1e-6]. */
RADNER_API radner_status radner_verify_residuals(const radner_model* model, size_t grid_size,
                                                 radner_report** out);
RADNER_API void radner_report_free(radner_report* report);
RADNER_API size_t radner_report_rows(const radner_report* report);
RADNER_API radner_status radner_report_row(const radner_report* report, size_t index,
                                           const char** equation, double* max_residual,
                                           double* argmax_t, double* fd_residual);
/* Largest |f(1)| over all functions and largest residual exactly at t = 1. */
RADNER_API radner_status radner_report_terminal(const radner_report* report, double* terminal_max,
                                                double* endpoint_max);

RADNER_API radner_status radner_check_optimizers(const radner_model* model, size_t n_samples,
                                                 uint64_t seed, double* investor_dev,
                                                 double* tracker_dev);
RADNER_API radner_status radner_check_clearing(const radner_model* model, size_t n_samples,
                                               uint64_t seed, double* max_dev);

typedef struct radner_bound_report {
  int equality_mode;
  double min_z1_ratio;
  double min_z2_ratio;
  double min_z1_deficit;
  double min_z2_deficit;
  double max_equality_gap;
  double taylor_ratio;
} radner_bound_report;

RADNER_API radner_status radner_check_bounds(const radner_model* model, size_t grid_size,
                                             radner_bound_report* report);
/* Exogenous model only. */
RADNER_API radner_status radner_check_decoupling(const radner_model* model, size_t grid_size,
                                                 double* g1_rate_dev, double* mu_dev);

/* ---- simulation ------------------------------------------------------ */

typedef struct radner_path_view {
  uint64_t path_id;
  size_t nodes;
  const double* t;
  const double* D;
  const double* Yp;
  const double* Y;
  const double* S;
  const double* theta_inv;
  const double* theta_tracker;
  const double* X_inv;
  const double* X_tracker;
  const double* V_inv;
} radner_path_view;

/* Return nonzero to stop early. The view is valid only during the call. */
typedef int (*radner_path_callback)(const radner_path_view* path, void* user);

RADNER_API radner_status radner_sample_paths(const radner_model* model, size_t n_steps,
                                             size_t n_paths, uint64_t seed,
                                             radner_measure measure,
                                             radner_path_callback callback, void* user);

typedef struct radner_estimate {
  double mean;
  double std_error;
  double target;
  double z;
  size_t n;
} radner_estimate;

typedef struct radner_martingale_report {
  radner_estimate value_p;
  radner_estimate wealth_q;
  radner_estimate d_hat_q;
  int saturated;
} radner_martingale_report;

RADNER_API radner_status radner_martingale_check(const radner_model* model, size_t n_steps,
                                                 size_t n_paths, uint64_t seed, size_t substeps,
                                                 radner_martingale_report* report);

/* Holdings rule. May be invoked concurrently from worker threads. */
typedef double (*radner_strategy_rule)(double t, double Y, double Yp, void* user);

RADNER_API radner_status radner_tracker_objective(const radner_model* model, size_t n_steps,
                                                  size_t n_paths, uint64_t seed,
                                                  radner_strategy_rule rule, void* user,
                                                  radner_estimate* estimate);
/* Both rules on the same paths; difference = first - second path by path. */
RADNER_API radner_status radner_compare_tracker_objectives(
    const radner_model* model, size_t n_steps, size_t n_paths, uint64_t seed,
    radner_strategy_rule first, void* first_user, radner_strategy_rule second,
    void* second_user, radner_estimate* first_estimate, radner_estimate* second_estimate,
    radner_estimate* difference);

/* ---- welfare --------------------------------------------------------- */

typedef struct radner_welfare_report {
  double ce_sum_endogenous;
  double ce_sum_exogenous;
  double difference_direct;
  double difference_formula; /* NaN unless formula_available */
  double first_term;
  double g33_integral_gap;
  double sigma_threshold;
  int formula_available;
} radner_welfare_report;

RADNER_API radner_status radner_aggregate_welfare(const radner_model* model, double* welfare);
/* require_formula != 0 turns Y0 or Yp0 != 0 into RADNER_E_HYPOTHESIS_VIOLATION. */
RADNER_API radner_status radner_welfare_difference(const radner_params* params, double tol,
                                                   int require_formula,
                                                   radner_welfare_report* report);
RADNER_API radner_status radner_sigma_threshold(const radner_params* params, double tol,
                                                double* threshold);

typedef struct radner_sweep radner_sweep;

/* axis is one of "sigma_Yp", "sigma_D", "kappa", "I". */
RADNER_API radner_status radner_default_axis_values(const char* axis, double* values,
                                                    size_t capacity, size_t* count);
RADNER_API radner_status radner_sweep_run(const radner_params* base, const char* axis,
                                          const double* values, size_t n_values,
                                          const double* a_values, size_t n_a, double tol,
                                          radner_sweep** out);
RADNER_API void radner_sweep_free(radner_sweep* sweep);
RADNER_API size_t radner_sweep_cells(const radner_sweep* sweep);
/* Returns the failure status of the cell; *error is NULL for successful cells. */
RADNER_API radner_status radner_sweep_cell(const radner_sweep* sweep, size_t index,
                                           double* axis_value, double* a,
                                           radner_welfare_report* report, const char** error);
/* Writes the CSV (header included) into buffer and returns the full length
 * excluding the terminating NUL. Call with capacity 0 to size the buffer. */
RADNER_API size_t radner_sweep_csv(const radner_sweep* sweep, char* buffer, size_t capacity);

#ifdef __cplusplus
}
#endif

#endif /* RADNER_RADNER_H */
