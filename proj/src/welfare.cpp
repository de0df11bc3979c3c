#include "welfare.hpp"

#include <cmath>
#include <cstdio>

#include "error.hpp"
#include "parallel.hpp"

namespace radner::welfare {
namespace {

template <class C>
double aggregate(const C& c) {
  const ModelParams& p = c.params();
  const double s0 = stock_price(c, 0.0, p.D0, p.Y0, p.Yp0);
  return s0 * (p.Sigma - p.Y0) + p.I * investor_certainty_equivalent(c, 0.0, 0.0, p.Y0, p.Yp0);
}

// a^3 sigma_D^6 / (2 I P^2), the Sigma^2 coefficient of the difference.
double supply_unit(const ModelParams& p) {
  const double sd2 = p.sigma_D * p.sigma_D;
  const double P = p.tracker_scale();
  return p.a * p.a * p.a * sd2 * sd2 * sd2 / (2.0 * p.I * P * P);
}

bool same_params(const ModelParams& x, const ModelParams& y) {
  return x.I == y.I && x.a == y.a && x.sigma_D == y.sigma_D && x.sigma_Yp == y.sigma_Yp &&
         x.Sigma == y.Sigma && x.Y0 == y.Y0 && x.Yp0 == y.Yp0 && x.D0 == y.D0;
}

}  // namespace

double aggregate_welfare(const EndogenousCoefficients& c) { return aggregate(c); }
double aggregate_welfare(const ExogenousCoefficients& c) { return aggregate(c); }

double first_term(const ModelParams& p) { return supply_unit(p) * p.Sigma * p.Sigma; }

double sigma_threshold_from_gap(const ModelParams& p, double gap) {
  const double rhs = -p.I * p.noise_var() * gap / supply_unit(p);
  return std::sqrt(std::max(0.0, rhs));
}

WelfareReport welfare_difference(const EndogenousCoefficients& en, const ExogenousCoefficients& ex,
                                 bool require_formula) {
  const ModelParams& p = en.params();
  if (!same_params(p, ex.params())) {
    throw Error(ErrorCode::kInvalidArgument, "models were solved for different parameters");
  }
  WelfareReport r;
  r.ce_sum_endogenous = aggregate_welfare(en);
  r.ce_sum_exogenous = aggregate_welfare(ex);
  r.difference_direct = r.ce_sum_endogenous - r.ce_sum_exogenous;
  r.first_term = first_term(p);
  r.g33_integral_gap =
      en.core().quadrature(Quadrature::kG33, 1.0) - ex.core().quadrature(Quadrature::kG33, 1.0);
  r.sigma_threshold = sigma_threshold_from_gap(p, r.g33_integral_gap);
  r.formula_available = p.Y0 == 0.0 && p.Yp0 == 0.0;
  if (r.formula_available) {
    r.difference_formula = r.first_term + p.I * p.noise_var() * r.g33_integral_gap;
  } else if (require_formula) {
    throw Error(ErrorCode::kHypothesisViolation,
                "the closed-form welfare difference requires Y0 = Yp0 = 0");
  } else {
    r.difference_formula = std::nan("");
  }
  return r;
}

WelfareReport welfare_difference(const ModelParams& params, const WelfareOptions& options) {
  params.validate();
  if (options.require_formula && (params.Y0 != 0.0 || params.Yp0 != 0.0)) {
    throw Error(ErrorCode::kHypothesisViolation,
                "the closed-form welfare difference requires Y0 = Yp0 = 0");
  }
  return welfare_difference(solve_endogenous(params, options.tol),
                            solve_exogenous(params, options.tol), options.require_formula);
}

double sigma_threshold(const ModelParams& params, double tol) {
  params.validate();
  const double gap = solve_core(params, tol).quadrature(Quadrature::kG33, 1.0) -
                     solve_core_exogenous(params, tol).quadrature(Quadrature::kG33, 1.0);
  return sigma_threshold_from_gap(params, gap);
}

std::string_view axis_name(Axis axis) {
  switch (axis) {
    case Axis::kSigmaYp: return "sigma_Yp";
    case Axis::kSigmaD: return "sigma_D";
    case Axis::kKappa: return "kappa";
    case Axis::kI: return "I";
  }
  return "?";
}

std::optional<Axis> parse_axis(std::string_view name) {
  for (Axis a : {Axis::kSigmaYp, Axis::kSigmaD, Axis::kKappa, Axis::kI}) {
    if (name == axis_name(a)) return a;
  }
  return std::nullopt;
}

std::vector<double> default_axis_values(Axis axis) {
  std::vector<double> v;
  switch (axis) {
    case Axis::kSigmaYp:
      for (int i = 0; i <= 40; ++i) v.push_back(0.5 * i);
      break;
    case Axis::kSigmaD:
      for (int i = 1; i <= 40; ++i) v.push_back(0.1 * i);
      break;
    case Axis::kKappa:
      for (int i = 1; i <= 40; ++i) v.push_back(0.5 * i);
      break;
    case Axis::kI:
      for (int i = 1; i <= 40; ++i) v.push_back(i);
      break;
  }
  return v;
}

ModelParams with_axis_value(const ModelParams& base, Axis axis, double value, double a) {
  ModelParams p = base;
  p.a = a;
  switch (axis) {
    case Axis::kSigmaYp: p.sigma_Yp = value; break;
    case Axis::kSigmaD: p.sigma_D = value; break;
    case Axis::kKappa: p.kappa = value; break;
    case Axis::kI:
      if (!(value >= 1.0 && value <= 1e6 && std::floor(value) == value)) {
        char msg[96];
        std::snprintf(msg, sizeof msg, "I must be a positive integer, got %.17g", value);
        throw Error(ErrorCode::kConfigInvalid, msg);
      }
      p.I = static_cast<int>(value);
      break;
  }
  p.with_equal_holdings();
  return p;
}

SweepTable sweep(const ModelParams& base, Axis axis, const std::vector<double>& values,
                 const std::vector<double>& a_values, double tol) {
  if (base.Y0 != 0.0 || base.Yp0 != 0.0) {
    throw Error(ErrorCode::kHypothesisViolation, "sweeps require Y0 = Yp0 = 0");
  }
  if (values.empty() || a_values.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "a sweep needs at least one axis value and one a");
  }
  SweepTable table;
  table.axis = axis;
  table.cells.resize(values.size() * a_values.size());
  for (std::size_t ia = 0; ia < a_values.size(); ++ia) {
    for (std::size_t iv = 0; iv < values.size(); ++iv) {
      auto& cell = table.cells[ia * values.size() + iv];
      cell.axis_value = values[iv];
      cell.a = a_values[ia];
    }
  }
  parallel_for(table.cells.size(), [&](std::size_t i) {
    SweepCell& cell = table.cells[i];
    try {
      const ModelParams p = with_axis_value(base, axis, cell.axis_value, cell.a);
      cell.report = welfare_difference(p, {tol, true});
    } catch (const Error& e) {
      cell.error = e.what();
      cell.error_code = e.code();
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
  });
  return table;
}

std::string format_sweep_csv(const SweepTable& table) {
  std::string out = kSweepCsvHeader;
  out += '\n';
  const std::string axis(axis_name(table.axis));
  char line[512];
  for (const SweepCell& c : table.cells) {
    int len;
    if (c.report) {
      const WelfareReport& r = *c.report;
      len = std::snprintf(line, sizeof line, "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                          axis.c_str(), c.axis_value, c.a, r.difference_direct,
                          r.difference_formula, r.g33_integral_gap, r.sigma_threshold);
    } else {
      len = std::snprintf(line, sizeof line, "%s,%.17g,%.17g,,,,\n", axis.c_str(), c.axis_value,
                          c.a);
    }
    out.append(line, static_cast<std::size_t>(len));
  }
  return out;
}

}  // namespace radner::welfare
