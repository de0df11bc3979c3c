#pragma once

// Adaptive explicit Runge-Kutta integration (Dormand-Prince 5(4) pair) with a
// continuous 4th-order extension over every accepted step.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace radner::ode {

using State = std::vector<double>;

// Writes dy/dt into the last argument. Must be deterministic.
using Rhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

struct IvpSpec {
  std::size_t dimension = 0;
  Rhs rhs;
  State y0;
  double t_start = 0.0;
  double t_end = 1.0;
  double rel_tol = 1e-10;
  double abs_tol = 1e-10;
  // Upper bound on a single step; zero means the whole span.
  double max_step = 0.0;
  // Also reject steps whose interpolant derivative misses the field at the
  // step midpoint by more than a fixed multiple of the error weight. Costs
  // one extra evaluation per step.
  bool control_dense_derivative = true;
};

struct IntegrationStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evaluations = 0;
};

// Immutable piecewise-polynomial solution. Safe to share between threads.
class DenseSolution {
 public:
  std::size_t dimension() const noexcept { return dim_; }
  double t_start() const noexcept { return knots_.front(); }
  double t_end() const noexcept { return knots_.back(); }

  std::span<const double> knots() const noexcept { return knots_; }
  std::span<const double> state_at_knot(std::size_t i) const;

  // Interpolated state. At a knot the stored state is returned unchanged.
  State eval(double t) const;
  double eval(double t, std::size_t component) const;

  // Analytic time derivative of the interpolant.
  State derivative(double t) const;
  double derivative(double t, std::size_t component) const;

  // Estimated bound on the global error (max norm, same for every
  // component) at the knot that closes the interval containing t: local error
  // estimates propagated with the observed growth rate of the field. Between
  // knots an interpolation allowance is added per component.
  State error_estimate(double t) const;

  const IntegrationStats& stats() const noexcept { return stats_; }

 private:
  friend DenseSolution integrate(const IvpSpec& spec);

  // Index of the interval [knots_[i], knots_[i+1]] that contains t, after the
  // domain check.
  std::size_t locate(double t) const;
  const double* coeffs(std::size_t interval) const { return &coeffs_[interval * 4 * dim_]; }

  std::size_t dim_ = 0;
  std::vector<double> knots_;
  std::vector<double> states_;   // (knots) x dim
  std::vector<double> coeffs_;   // (intervals) x 4 x dim
  std::vector<double> errors_;   // (knots) x dim, accumulated
  IntegrationStats stats_;
};

// Throws Error(kStepSizeUnderflow) when the step falls below 1e-12 of the
// span and Error(kNonFiniteRhs) when the right-hand side is not finite.
DenseSolution integrate(const IvpSpec& spec);

// Tolerance used when deciding whether a time lies inside a solution's span.
inline constexpr double kDomainSlack = 1e-12;

}  // namespace radner::ode
