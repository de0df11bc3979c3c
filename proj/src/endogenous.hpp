#pragma once

// Equilibrium with I exponential investors and one endogenous noise tracker
// who is penalized by kappa * (theta - Y)^2 for deviating from the target Y.

#include <array>
#include <concepts>
#include <string_view>

#include "core_solution.hpp"
#include "params.hpp"

namespace radner {

// Solves the two-dimensional core problem together with the five quadrature
// states needed by g1, f3, f23, f33 and f1.
CoreSolution solve_core(const ModelParams& params, double tol = kDefaultTol);

class EndogenousCoefficients {
 public:
  enum class Fn {
    alpha, beta, mu,
    g1, g2, g3, g22, g23, g33,
    f1, f2, f3, f22, f23, f33,
  };
  static constexpr std::array<Fn, 15> kAll = {
      Fn::alpha, Fn::beta, Fn::mu,  Fn::g1, Fn::g2,  Fn::g3,  Fn::g22, Fn::g23,
      Fn::g33,   Fn::f1,   Fn::f2,  Fn::f3, Fn::f22, Fn::f23, Fn::f33};
  static std::string_view name(Fn fn);

  EndogenousCoefficients(const ModelParams& params, CoreSolution core);

  const ModelParams& params() const noexcept { return params_; }
  const CoreSolution& core() const noexcept { return core_; }

  double value(Fn fn, double t) const;
  // d/dt. Closed-form functions are differentiated analytically, integrated
  // ones through the interpolant.
  double rate(Fn fn, double t) const;

  double alpha(double t) const { return value(Fn::alpha, t); }
  double beta(double t) const { return value(Fn::beta, t); }
  double mu(double t) const { return value(Fn::mu, t); }

 private:
  ModelParams params_;
  CoreSolution core_;
  // Slopes of the closed-form pieces, all as multiples of s = 1 - t.
  double alpha_slope_, mu_slope_, g2_slope_, g22_slope_, g23_factor_, g3_factor_, g1_slope_,
      f1_slope_, f2_slope_, f3_curv_, f22_slope_;
};

EndogenousCoefficients build_coefficients(const ModelParams& params, const CoreSolution& core);

// solve_core followed by build_coefficients.
EndogenousCoefficients solve_endogenous(const ModelParams& params, double tol = kDefaultTol);

template <class C>
concept PriceCoefficients = requires(const C& c, double t) {
  { c.alpha(t) } -> std::convertible_to<double>;
  { c.beta(t) } -> std::convertible_to<double>;
  { c.mu(t) } -> std::convertible_to<double>;
};

// S_t = D_t + mu(t) + alpha(t) Y_t + beta(t) Y'_t, the affine price shared by
// both models.
template <PriceCoefficients C>
double stock_price(const C& coeffs, double t, double D, double Y, double Yp) {
  t = checked_time(t);
  return D + coeffs.mu(t) + coeffs.alpha(t) * Y + coeffs.beta(t) * Yp;
}

double investor_strategy(const EndogenousCoefficients& coeffs, double t, double Y, double Yp);
double tracker_strategy(const EndogenousCoefficients& coeffs, double t, double Y, double Yp);

// Value of -exp(-a * (...)) with the exponent clamped to +-kExponentLimit.
struct UtilityValue {
  double value;
  bool saturated;
};
inline constexpr double kExponentLimit = 700.0;

// Exponential utility of wealth x plus the quadratic form in (Y, Y').
UtilityValue exponential_value(double a, double certainty_equivalent);

UtilityValue investor_value(const EndogenousCoefficients& coeffs, double t, double x, double Y,
                            double Yp);
double tracker_value(const EndogenousCoefficients& coeffs, double t, double x, double Y,
                     double Yp);

// x + g1 + g2 Y + g3 Y' + g22 Y^2 + g23 Y Y' + g33 Y'^2; the investor's
// certainty equivalent at state (t, x, Y, Y').
template <class C>
double investor_certainty_equivalent(const C& coeffs, double t, double x, double Y, double Yp) {
  using F = typename C::Fn;
  t = checked_time(t);
  return x + coeffs.value(F::g1, t) + coeffs.value(F::g2, t) * Y + coeffs.value(F::g3, t) * Yp +
         coeffs.value(F::g22, t) * Y * Y + coeffs.value(F::g23, t) * Y * Yp +
         coeffs.value(F::g33, t) * Yp * Yp;
}

}  // namespace radner
