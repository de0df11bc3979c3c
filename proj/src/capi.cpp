#include "radner/radner.h"

#include <cmath>
#include <cstring>
#include <new>
#include <string>
#include <variant>

#include "endogenous.hpp"
#include "error.hpp"
#include "exogenous.hpp"
#include "simulation.hpp"
#include "verification.hpp"
#include "welfare.hpp"

using radner::EndogenousCoefficients;
using radner::Error;
using radner::ErrorCode;
using radner::ExogenousCoefficients;
using radner::ModelParams;

struct radner_model {
  std::variant<EndogenousCoefficients, ExogenousCoefficients> coeffs;
};

struct radner_report {
  radner::verify::ResidualReport report;
};

struct radner_sweep {
  radner::welfare::SweepTable table;
  std::string csv;
};

namespace {

thread_local std::string last_error;

radner_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return RADNER_E_INVALID_ARGUMENT;
    case ErrorCode::kConfigInvalid: return RADNER_E_CONFIG_INVALID;
    case ErrorCode::kStepSizeUnderflow: return RADNER_E_STEP_SIZE_UNDERFLOW;
    case ErrorCode::kNonFiniteRhs: return RADNER_E_NON_FINITE_RHS;
    case ErrorCode::kOutOfDomain: return RADNER_E_OUT_OF_DOMAIN;
    case ErrorCode::kResidualExceedsTolerance: return RADNER_E_RESIDUAL_EXCEEDS_TOLERANCE;
    case ErrorCode::kIdentityViolation: return RADNER_E_IDENTITY_VIOLATION;
    case ErrorCode::kClearingViolation: return RADNER_E_CLEARING_VIOLATION;
    case ErrorCode::kBoundViolation: return RADNER_E_BOUND_VIOLATION;
    case ErrorCode::kInvalidMeasure: return RADNER_E_INVALID_MEASURE;
    case ErrorCode::kHypothesisViolation: return RADNER_E_HYPOTHESIS_VIOLATION;
  }
  return RADNER_E_INTERNAL;
}

radner_status fail(radner_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

template <class Body>
radner_status guarded(Body&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(RADNER_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(RADNER_E_INTERNAL, e.what());
  } catch (...) {
    return fail(RADNER_E_INTERNAL, "unknown failure");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

ModelParams to_params(const radner_params* in) {
  require(in != nullptr, "params is NULL");
  ModelParams p;
  p.I = in->I;
  p.a = in->a;
  p.sigma_D = in->sigma_D;
  p.sigma_Yp = in->sigma_Yp;
  p.kappa = in->kappa;
  p.Sigma = in->Sigma;
  p.Y0 = in->Y0;
  p.Yp0 = in->Yp0;
  p.D0 = in->D0;
  if (in->theta0 != nullptr) {
    p.theta0.assign(in->theta0, in->theta0 + in->theta0_len);
  } else {
    p.with_equal_holdings();
  }
  return p;
}

const radner_model& checked(const radner_model* m) {
  require(m != nullptr, "model is NULL");
  return *m;
}

const EndogenousCoefficients& endogenous(const radner_model* m, const char* what) {
  const auto* en = std::get_if<EndogenousCoefficients>(&checked(m).coeffs);
  if (en == nullptr) throw Error(ErrorCode::kInvalidArgument, std::string(what) + " needs the endogenous model");
  return *en;
}

template <class Fn>
decltype(auto) visit_model(const radner_model* m, Fn&& fn) {
  return std::visit(std::forward<Fn>(fn), checked(m).coeffs);
}

radner_estimate to_c(const radner::sim::MeanEstimate& e) {
  return {e.mean, e.std_error, e.target, e.z(), e.n};
}

radner_estimate to_c(const radner::sim::ObjectiveEstimate& e) {
  return {e.mean, e.std_error, 0.0, 0.0, e.n};
}

radner_welfare_report to_c(const radner::welfare::WelfareReport& r) {
  return {r.ce_sum_endogenous, r.ce_sum_exogenous, r.difference_direct, r.difference_formula,
          r.first_term,        r.g33_integral_gap, r.sigma_threshold,   r.formula_available};
}

radner::sim::StrategyRule wrap_rule(radner_strategy_rule rule, void* user) {
  require(rule != nullptr, "strategy rule is NULL");
  return [rule, user](double t, double Y, double Yp) { return rule(t, Y, Yp, user); };
}

radner::welfare::Axis to_axis(const char* axis) {
  require(axis != nullptr, "axis is NULL");
  const auto parsed = radner::welfare::parse_axis(axis);
  if (!parsed) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("unknown axis '") + axis + "' (expected sigma_Yp, sigma_D, kappa or I)");
  }
  return *parsed;
}

}  // namespace

extern "C" {

const char* radner_version(void) { return "0.1.0"; }

const char* radner_status_name(radner_status status) {
  switch (status) {
    case RADNER_OK: return "Ok";
    case RADNER_WARN_SATURATED: return "Saturated";
    case RADNER_E_INVALID_ARGUMENT: return "InvalidArgument";
    case RADNER_E_CONFIG_INVALID: return "ConfigInvalid";
    case RADNER_E_STEP_SIZE_UNDERFLOW: return "StepSizeUnderflow";
    case RADNER_E_NON_FINITE_RHS: return "NonFiniteRhs";
    case RADNER_E_OUT_OF_DOMAIN: return "OutOfDomain";
    case RADNER_E_RESIDUAL_EXCEEDS_TOLERANCE: return "ResidualExceedsTolerance";
    case RADNER_E_IDENTITY_VIOLATION: return "IdentityViolation";
    case RADNER_E_CLEARING_VIOLATION: return "ClearingViolation";
    case RADNER_E_BOUND_VIOLATION: return "BoundViolation";
    case RADNER_E_INVALID_MEASURE: return "InvalidMeasure";
    case RADNER_E_HYPOTHESIS_VIOLATION: return "HypothesisViolation";
    case RADNER_E_INTERNAL: return "Internal";
  }
  return "Unknown";
}

const char* radner_last_error(void) { return last_error.c_str(); }

void radner_params_init(radner_params* params) {
  if (params == nullptr) return;
  const ModelParams base;
  *params = {base.I,     base.a,  base.sigma_D, base.sigma_Yp, base.kappa, base.Sigma,
             base.Y0,    base.Yp0, base.D0,     nullptr,       0};
}

radner_status radner_params_validate(const radner_params* params) {
  return guarded([&] {
    to_params(params).validate();
    return RADNER_OK;
  });
}

radner_status radner_model_solve(const radner_params* params, radner_model_kind kind, double tol,
                                 radner_model** out) {
  return guarded([&] {
    require(out != nullptr, "out is NULL");
    require(tol > 0.0 && std::isfinite(tol), "tol must be a positive finite number");
    *out = nullptr;
    const ModelParams p = to_params(params);
    if (kind == RADNER_ENDOGENOUS) {
      *out = new radner_model{radner::solve_endogenous(p, tol)};
    } else if (kind == RADNER_EXOGENOUS) {
      *out = new radner_model{radner::solve_exogenous(p, tol)};
    } else {
      require(false, "unknown model kind");
    }
    return RADNER_OK;
  });
}

void radner_model_free(radner_model* model) { delete model; }

radner_model_kind radner_model_kind_of(const radner_model* model) {
  return std::holds_alternative<EndogenousCoefficients>(model->coeffs) ? RADNER_ENDOGENOUS
                                                                        : RADNER_EXOGENOUS;
}

size_t radner_model_function_count(const radner_model* model) {
  if (model == nullptr) return 0;
  return visit_model(model, [](const auto& c) { return c.kAll.size(); });
}

const char* radner_model_function_name(const radner_model* model, size_t index) {
  if (model == nullptr) return nullptr;
  return visit_model(model, [&](const auto& c) -> const char* {
    if (index >= c.kAll.size()) return nullptr;
    // names are string literals
    return c.name(c.kAll[index]).data();
  });
}

radner_status radner_model_eval(const radner_model* model, size_t index, double t, double* value) {
  return guarded([&] {
    require(value != nullptr, "value is NULL");
    *value = visit_model(model, [&](const auto& c) {
      require(index < c.kAll.size(), "function index out of range");
      return c.value(c.kAll[index], t);
    });
    return RADNER_OK;
  });
}

radner_status radner_model_eval_rate(const radner_model* model, size_t index, double t,
                                     double* rate) {
  return guarded([&] {
    require(rate != nullptr, "rate is NULL");
    *rate = visit_model(model, [&](const auto& c) {
      require(index < c.kAll.size(), "function index out of range");
      return c.rate(c.kAll[index], t);
    });
    return RADNER_OK;
  });
}

radner_status radner_model_eval_all(const radner_model* model, double t, double* values) {
  return guarded([&] {
    require(values != nullptr, "values is NULL");
    visit_model(model, [&](const auto& c) {
      for (std::size_t i = 0; i < c.kAll.size(); ++i) values[i] = c.value(c.kAll[i], t);
    });
    return RADNER_OK;
  });
}

radner_status radner_model_core(const radner_model* model, double s, double* z1, double* z2) {
  return guarded([&] {
    require(z1 != nullptr && z2 != nullptr, "output is NULL");
    visit_model(model, [&](const auto& c) {
      *z1 = c.core().z1(s);
      *z2 = c.core().z2(s);
    });
    return RADNER_OK;
  });
}

radner_status radner_model_bounds(const radner_model* model, double* c1, double* c2) {
  return guarded([&] {
    require(c1 != nullptr && c2 != nullptr, "output is NULL");
    visit_model(model, [&](const auto& c) {
      *c1 = c.core().bound1();
      *c2 = c.core().bound2();
    });
    return RADNER_OK;
  });
}

radner_status radner_stock_price(const radner_model* model, double t, double D, double Y,
                                 double Yp, double* price) {
  return guarded([&] {
    require(price != nullptr, "price is NULL");
    *price = visit_model(model, [&](const auto& c) { return radner::stock_price(c, t, D, Y, Yp); });
    return RADNER_OK;
  });
}

radner_status radner_investor_strategy(const radner_model* model, double t, double Y, double Yp,
                                       double* holding) {
  return guarded([&] {
    require(holding != nullptr, "holding is NULL");
    *holding = visit_model(model, [&](const auto& c) {
      if constexpr (std::is_same_v<std::decay_t<decltype(c)>, EndogenousCoefficients>) {
        return radner::investor_strategy(c, t, Y, Yp);
      } else {
        return radner::investor_strategy_exogenous(c.params(), t, Y);
      }
    });
    return RADNER_OK;
  });
}

radner_status radner_tracker_strategy(const radner_model* model, double t, double Y, double Yp,
                                      double* holding) {
  return guarded([&] {
    require(holding != nullptr, "holding is NULL");
    *holding = visit_model(model, [&](const auto& c) {
      if constexpr (std::is_same_v<std::decay_t<decltype(c)>, EndogenousCoefficients>) {
        return radner::tracker_strategy(c, t, Y, Yp);
      } else {
        radner::checked_time(t);
        return Y;
      }
    });
    return RADNER_OK;
  });
}

radner_status radner_investor_value(const radner_model* model, double t, double x, double Y,
                                    double Yp, double* value) {
  return guarded([&] {
    require(value != nullptr, "value is NULL");
    const radner::UtilityValue v = visit_model(model, [&](const auto& c) {
      return radner::exponential_value(c.params().a,
                                       radner::investor_certainty_equivalent(c, t, x, Y, Yp));
    });
    *value = v.value;
    if (v.saturated) return fail(RADNER_WARN_SATURATED, "exponent clamped to +-700");
    return RADNER_OK;
  });
}

radner_status radner_tracker_value(const radner_model* model, double t, double x, double Y,
                                   double Yp, double* value) {
  return guarded([&] {
    require(value != nullptr, "value is NULL");
    *value = radner::tracker_value(endogenous(model, "tracker value"), t, x, Y, Yp);
    return RADNER_OK;
  });
}

radner_status radner_verify_residuals(const radner_model* model, size_t grid_size,
                                      radner_report** out) {
  return guarded([&] {
    require(out != nullptr, "out is NULL");
    *out = nullptr;
    auto report = visit_model(model, [&](const auto& c) {
      if constexpr (std::is_same_v<std::decay_t<decltype(c)>, EndogenousCoefficients>) {
        return radner::verify::residuals_endogenous(c, grid_size);
      } else {
        return radner::verify::residuals_exogenous(c, grid_size);
      }
    });
    *out = new radner_report{std::move(report)};
    return RADNER_OK;
  });
}

void radner_report_free(radner_report* report) { delete report; }

size_t radner_report_rows(const radner_report* report) {
  return report ? report->report.rows.size() : 0;
}

radner_status radner_report_row(const radner_report* report, size_t index, const char** equation,
                                double* max_residual, double* argmax_t, double* fd_residual) {
  return guarded([&] {
    require(report != nullptr, "report is NULL");
    require(index < report->report.rows.size(), "row index out of range");
    const auto& row = report->report.rows[index];
    if (equation) *equation = row.equation.c_str();
    if (max_residual) *max_residual = row.max_residual;
    if (argmax_t) *argmax_t = row.argmax_t;
    if (fd_residual) *fd_residual = row.fd_residual;
    return RADNER_OK;
  });
}

radner_status radner_report_terminal(const radner_report* report, double* terminal_max,
                                     double* endpoint_max) {
  return guarded([&] {
    require(report != nullptr, "report is NULL");
    if (terminal_max) *terminal_max = report->report.terminal_max;
    if (endpoint_max) *endpoint_max = report->report.endpoint_max;
    return RADNER_OK;
  });
}

radner_status radner_check_optimizers(const radner_model* model, size_t n_samples, uint64_t seed,
                                      double* investor_dev, double* tracker_dev) {
  return guarded([&] {
    const auto r = radner::verify::check_pointwise_optimizers(
        endogenous(model, "optimizer identities"), n_samples, seed);
    if (investor_dev) *investor_dev = r.investor_max_dev;
    if (tracker_dev) *tracker_dev = r.tracker_max_dev;
    return RADNER_OK;
  });
}

radner_status radner_check_clearing(const radner_model* model, size_t n_samples, uint64_t seed,
                                    double* max_dev) {
  return guarded([&] {
    const double dev = visit_model(model, [&](const auto& c) {
      if constexpr (std::is_same_v<std::decay_t<decltype(c)>, EndogenousCoefficients>) {
        return radner::verify::check_clearing(c, n_samples, seed);
      } else {
        return radner::verify::check_clearing_exogenous(c.params(), n_samples, seed);
      }
    });
    if (max_dev) *max_dev = dev;
    return RADNER_OK;
  });
}

radner_status radner_check_bounds(const radner_model* model, size_t grid_size,
                                  radner_bound_report* report) {
  return guarded([&] {
    const auto r = visit_model(model, [&](const auto& c) {
      return radner::verify::check_positivity_bounds(c.core(), grid_size);
    });
    if (report) {
      *report = {r.equality_mode, r.min_z1,           r.min_z2,      r.min_z1_deficit,
                 r.min_z2_deficit, r.max_equality_gap, r.taylor_ratio};
    }
    return RADNER_OK;
  });
}

radner_status radner_check_decoupling(const radner_model* model, size_t grid_size,
                                      double* g1_rate_dev, double* mu_dev) {
  return guarded([&] {
    const auto* ex = std::get_if<ExogenousCoefficients>(&checked(model).coeffs);
    require(ex != nullptr, "decoupling identities need the exogenous model");
    require(grid_size >= 2, "grid_size must be >= 2");
    const auto r = radner::verify::check_exogenous_decoupling(*ex, grid_size);
    if (g1_rate_dev) *g1_rate_dev = r.g1_rate_max_dev;
    if (mu_dev) *mu_dev = r.mu_max_dev;
    return RADNER_OK;
  });
}

radner_status radner_sample_paths(const radner_model* model, size_t n_steps, size_t n_paths,
                                  uint64_t seed, radner_measure measure,
                                  radner_path_callback callback, void* user) {
  return guarded([&] {
    require(callback != nullptr, "callback is NULL");
    require(n_steps >= 1, "n_steps must be >= 1");
    require(n_paths >= 1, "n_paths must be >= 1");
    require(measure == RADNER_MEASURE_P || measure == RADNER_MEASURE_QHAT, "unknown measure");
    const auto m = measure == RADNER_MEASURE_P ? radner::sim::Measure::kP
                                               : radner::sim::Measure::kQHat;
    visit_model(model, [&](const auto& c) {
      const radner::sim::PathSampler sampler(c, radner::sim::SimGrid{n_steps}, m, seed);
      radner::sim::PathBundle b;
      for (std::size_t i = 0; i < n_paths; ++i) {
        sampler.sample_into(i, b);
        const radner_path_view view{b.path_id,     b.t.size(),       b.t.data(),
                                    b.D.data(),    b.Yp.data(),      b.Y.data(),
                                    b.S.data(),    b.theta_inv.data(), b.theta_tracker.data(),
                                    b.X_inv.data(), b.X_tracker.data(), b.V_inv.data()};
        if (callback(&view, user) != 0) break;
      }
    });
    return RADNER_OK;
  });
}

radner_status radner_martingale_check(const radner_model* model, size_t n_steps, size_t n_paths,
                                      uint64_t seed, size_t substeps,
                                      radner_martingale_report* report) {
  return guarded([&] {
    require(report != nullptr, "report is NULL");
    require(n_steps >= 1, "n_steps must be >= 1");
    const auto* en = std::get_if<EndogenousCoefficients>(&checked(model).coeffs);
    if (en == nullptr) {
      throw Error(ErrorCode::kInvalidMeasure, "the Q-hat drift adjustment needs endogenous coefficients");
    }
    const auto r = radner::sim::martingale_check(*en, radner::sim::SimGrid{n_steps}, n_paths, seed,
                                                 substeps == 0 ? 1 : substeps);
    *report = {to_c(r.value_p), to_c(r.wealth_q), to_c(r.d_hat_q), r.saturated};
    return r.saturated ? fail(RADNER_WARN_SATURATED, "value target exponent clamped") : RADNER_OK;
  });
}

radner_status radner_tracker_objective(const radner_model* model, size_t n_steps, size_t n_paths,
                                       uint64_t seed, radner_strategy_rule rule, void* user,
                                       radner_estimate* estimate) {
  return guarded([&] {
    require(estimate != nullptr, "estimate is NULL");
    require(n_steps >= 1, "n_steps must be >= 1");
    *estimate = to_c(radner::sim::tracker_objective(endogenous(model, "tracker objective"),
                                                    radner::sim::SimGrid{n_steps}, n_paths, seed,
                                                    wrap_rule(rule, user)));
    return RADNER_OK;
  });
}

radner_status radner_compare_tracker_objectives(const radner_model* model, size_t n_steps,
                                                size_t n_paths, uint64_t seed,
                                                radner_strategy_rule first, void* first_user,
                                                radner_strategy_rule second, void* second_user,
                                                radner_estimate* first_estimate,
                                                radner_estimate* second_estimate,
                                                radner_estimate* difference) {
  return guarded([&] {
    require(n_steps >= 1, "n_steps must be >= 1");
    const auto r = radner::sim::compare_tracker_objectives(
        endogenous(model, "tracker objective"), radner::sim::SimGrid{n_steps}, n_paths, seed,
        wrap_rule(first, first_user), wrap_rule(second, second_user));
    if (first_estimate) *first_estimate = to_c(r.first);
    if (second_estimate) *second_estimate = to_c(r.second);
    if (difference) *difference = to_c(r.difference);
    return RADNER_OK;
  });
}

radner_status radner_aggregate_welfare(const radner_model* model, double* welfare) {
  return guarded([&] {
    require(welfare != nullptr, "welfare is NULL");
    *welfare = visit_model(model, [](const auto& c) { return radner::welfare::aggregate_welfare(c); });
    return RADNER_OK;
  });
}

radner_status radner_welfare_difference(const radner_params* params, double tol,
                                        int require_formula, radner_welfare_report* report) {
  return guarded([&] {
    require(report != nullptr, "report is NULL");
    require(tol > 0.0 && std::isfinite(tol), "tol must be a positive finite number");
    *report = to_c(radner::welfare::welfare_difference(to_params(params), {tol, require_formula != 0}));
    return RADNER_OK;
  });
}

radner_status radner_sigma_threshold(const radner_params* params, double tol, double* threshold) {
  return guarded([&] {
    require(threshold != nullptr, "threshold is NULL");
    require(tol > 0.0 && std::isfinite(tol), "tol must be a positive finite number");
    *threshold = radner::welfare::sigma_threshold(to_params(params), tol);
    return RADNER_OK;
  });
}

radner_status radner_default_axis_values(const char* axis, double* values, size_t capacity,
                                         size_t* count) {
  return guarded([&] {
    const auto v = radner::welfare::default_axis_values(to_axis(axis));
    if (count) *count = v.size();
    if (values != nullptr) {
      for (std::size_t i = 0; i < v.size() && i < capacity; ++i) values[i] = v[i];
    }
    return RADNER_OK;
  });
}

radner_status radner_sweep_run(const radner_params* base, const char* axis, const double* values,
                               size_t n_values, const double* a_values, size_t n_a, double tol,
                               radner_sweep** out) {
  return guarded([&] {
    require(out != nullptr, "out is NULL");
    *out = nullptr;
    require(values != nullptr || n_values == 0, "values is NULL");
    require(a_values != nullptr || n_a == 0, "a_values is NULL");
    require(tol > 0.0 && std::isfinite(tol), "tol must be a positive finite number");
    const auto ax = to_axis(axis);
    auto table = radner::welfare::sweep(to_params(base), ax,
                                        std::vector<double>(values, values + n_values),
                                        std::vector<double>(a_values, a_values + n_a), tol);
    auto* s = new radner_sweep{std::move(table), {}};
    s->csv = radner::welfare::format_sweep_csv(s->table);
    *out = s;
    return RADNER_OK;
  });
}

void radner_sweep_free(radner_sweep* sweep) { delete sweep; }

size_t radner_sweep_cells(const radner_sweep* sweep) {
  return sweep ? sweep->table.cells.size() : 0;
}

radner_status radner_sweep_cell(const radner_sweep* sweep, size_t index, double* axis_value,
                                double* a, radner_welfare_report* report, const char** error) {
  try {
    require(sweep != nullptr, "sweep is NULL");
    require(index < sweep->table.cells.size(), "cell index out of range");
  } catch (const Error& e) {
    return fail(RADNER_E_INVALID_ARGUMENT, e.what());
  }
  const auto& cell = sweep->table.cells[index];
  if (axis_value) *axis_value = cell.axis_value;
  if (a) *a = cell.a;
  if (cell.report) {
    if (report) *report = to_c(*cell.report);
    if (error) *error = nullptr;
    return RADNER_OK;
  }
  if (report) std::memset(report, 0, sizeof *report);
  if (error) *error = cell.error.c_str();
  return status_of(cell.error_code);
}

size_t radner_sweep_csv(const radner_sweep* sweep, char* buffer, size_t capacity) {
  if (sweep == nullptr) return 0;
  const std::string& csv = sweep->csv;
  if (buffer != nullptr && capacity > 0) {
    const std::size_t n = std::min(capacity - 1, csv.size());
    std::memcpy(buffer, csv.data(), n);
    buffer[n] = '\0';
  }
  return csv.size();
}

}  // extern "C"
