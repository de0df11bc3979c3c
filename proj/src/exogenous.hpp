#pragma once

// Baseline equilibrium in which the noise trader holds Y_t shares by fiat.

#include <array>
#include <string_view>

#include "core_solution.hpp"
#include "params.hpp"

namespace radner {

// Core pair plus the quadrature of z2 used by g1. kappa is ignored.
CoreSolution solve_core_exogenous(const ModelParams& params, double tol = kDefaultTol);

class ExogenousCoefficients {
 public:
  enum class Fn { alpha, beta, mu, g1, g2, g3, g22, g23, g33 };
  static constexpr std::array<Fn, 9> kAll = {Fn::alpha, Fn::beta, Fn::mu,  Fn::g1, Fn::g2,
                                             Fn::g3,    Fn::g22,  Fn::g23, Fn::g33};
  static std::string_view name(Fn fn);

  ExogenousCoefficients(const ModelParams& params, CoreSolution core);

  const ModelParams& params() const noexcept { return params_; }
  const CoreSolution& core() const noexcept { return core_; }

  double value(Fn fn, double t) const;
  double rate(Fn fn, double t) const;

  double alpha(double t) const { return value(Fn::alpha, t); }
  double beta(double t) const { return value(Fn::beta, t); }
  double mu(double t) const { return value(Fn::mu, t); }

 private:
  ModelParams params_;
  CoreSolution core_;
  double alpha_slope_, mu_slope_, g1_slope_, g2_slope_, g22_slope_;
};

ExogenousCoefficients build_coefficients_exogenous(const ModelParams& params,
                                                   const CoreSolution& core);

ExogenousCoefficients solve_exogenous(const ModelParams& params, double tol = kDefaultTol);

// (Sigma - Y) / I, independent of t and Y'.
double investor_strategy_exogenous(const ModelParams& params, double t, double Y);

}  // namespace radner
