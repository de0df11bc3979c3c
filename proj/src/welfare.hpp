#pragma once

// Certainty-equivalent aggregate welfare of the two models, their difference
// computed directly and in closed form, the critical supply and sweeps.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "endogenous.hpp"
#include "error.hpp"
#include "exogenous.hpp"

namespace radner::welfare {

// S_0 (Sigma - Y_0) + I * (investor CE at t = 0 with zero wealth).
double aggregate_welfare(const EndogenousCoefficients& coeffs);
double aggregate_welfare(const ExogenousCoefficients& coeffs);

struct WelfareReport {
  double ce_sum_endogenous = 0.0;
  double ce_sum_exogenous = 0.0;
  double difference_direct = 0.0;   // ce_sum_endogenous - ce_sum_exogenous
  double difference_formula = 0.0;  // NaN unless Y_0 = Y'_0 = 0
  double first_term = 0.0;          // a^3 Sigma^2 sigma_D^6 / (2 I (a sigma_D^2 + 2 kappa I)^2)
  double g33_integral_gap = 0.0;    // int_0^1 (g33_en - g33_ex)
  double sigma_threshold = 0.0;
  bool formula_available = false;
};

struct WelfareOptions {
  double tol = kDefaultTol;
  // Throw Error(kHypothesisViolation) instead of leaving the formula empty
  // when Y_0 or Y'_0 is nonzero.
  bool require_formula = false;
};

WelfareReport welfare_difference(const ModelParams& params, const WelfareOptions& options = {});
// From already solved models; both must share params.
WelfareReport welfare_difference(const EndogenousCoefficients& en, const ExogenousCoefficients& ex,
                                 bool require_formula = false);

// a^3 Sigma^2 sigma_D^6 / (2 I (a sigma_D^2 + 2 kappa I)^2).
double first_term(const ModelParams& params);

// Sigma* with the endogenous model ahead iff Sigma > Sigma*; zero when the
// noise term already favours it. Independent of params.Sigma.
double sigma_threshold(const ModelParams& params, double tol = kDefaultTol);
double sigma_threshold_from_gap(const ModelParams& params, double g33_integral_gap);

enum class Axis { kSigmaYp, kSigmaD, kKappa, kI };

std::string_view axis_name(Axis axis);
std::optional<Axis> parse_axis(std::string_view name);
// Value grid used when none is given.
std::vector<double> default_axis_values(Axis axis);
inline const std::vector<double> kDefaultAValues = {1.0, 10.0, 20.0};

// Returns base with the axis parameter replaced and holdings reset to the
// equal split. Throws Error(kConfigInvalid) for values that are not valid
// for the axis, e.g. a fractional investor count.
ModelParams with_axis_value(const ModelParams& base, Axis axis, double value, double a);

struct SweepCell {
  double axis_value = 0.0;
  double a = 0.0;
  std::optional<WelfareReport> report;
  std::string error;  // set when report is empty
  ErrorCode error_code = ErrorCode::kInvalidArgument;
};

struct SweepTable {
  Axis axis = Axis::kSigmaYp;
  // a-major, both in the order the caller gave them.
  std::vector<SweepCell> cells;
};

// One welfare_difference per (axis value, a). Cells are computed in parallel
// and failures are recorded per cell. The base must have Y_0 = Y'_0 = 0 and
// both lists must be non-empty.
SweepTable sweep(const ModelParams& base, Axis axis, const std::vector<double>& values,
                 const std::vector<double>& a_values, double tol = kDefaultTol);

// CSV with header axis,axis_value,a,diff_direct,diff_formula,g33_gap_integral,sigma_threshold.
// Failed cells are written with empty numeric fields.
inline constexpr const char* kSweepCsvHeader =
    "axis,axis_value,a,diff_direct,diff_formula,g33_gap_integral,sigma_threshold";
std::string format_sweep_csv(const SweepTable& table);

}  // namespace radner::welfare
