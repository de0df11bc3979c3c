#pragma once

#include <cstddef>
#include <memory>

#include "ode.hpp"
#include "params.hpp"

namespace radner {

inline constexpr double kDefaultTol = 1e-10;

// Step cap for the core solves. The verification checks differentiate the
// dense interpolant, whose derivative is one order less accurate than its
// values; capping the step at a fixed multiple of tol^(1/5) keeps that
// derivative error proportional to tol with a constant about 400 times
// smaller than the controller alone gives. Equals 1/64 at the default tol.
double core_max_step(double tol);

enum class ModelKind { kEndogenous, kExogenous };

// Quadrature states carried alongside the core pair. The exogenous model only
// carries kG33.
enum class Quadrature : std::size_t {
  kG33 = 0,  // int_0^s z2
  kF3,       // integral part of f3
  kF23,      // integral part of f23
  kF33,      // f33 itself
  kF1,       // int_0^s f33
};

// Solution (z1, z2) of a core initial value problem in reversed time
// s = 1 - t, plus its quadrature states.
//
// Internally the pair is integrated as the deficits u1 = C1 s^2 - z1 and
// u2 = C2 s^3 - z2 below the analytic upper bounds. Both deficits have
// nonnegative rates whenever z1, z2 > 0, so the strict bounds survive in
// floating point even where the gap is far below one ulp of z itself.
class CoreSolution {
 public:
  CoreSolution(ModelKind kind, const ModelParams& params, double bound1, double bound2,
               ode::DenseSolution dense, double tol);

  ModelKind kind() const noexcept { return kind_; }
  const ModelParams& params() const noexcept { return params_; }
  double tol() const noexcept { return tol_; }

  // Constants of the bounds z1(s) < C1 s^2 and z2(s) < C2 s^3.
  double bound1() const noexcept { return bound1_; }
  double bound2() const noexcept { return bound2_; }

  double z1(double s) const;
  double z2(double s) const;
  double z1_rate(double s) const;  // dz1/ds of the interpolant
  double z2_rate(double s) const;

  double z1_deficit(double s) const { return dense_->eval(s, 0); }
  double z2_deficit(double s) const { return dense_->eval(s, 1); }

  bool has(Quadrature q) const noexcept;
  double quadrature(Quadrature q, double s) const;
  double quadrature_rate(Quadrature q, double s) const;

  const ode::DenseSolution& dense() const noexcept { return *dense_; }

 private:
  std::size_t index(Quadrature q) const;

  ModelKind kind_;
  ModelParams params_;
  double bound1_;
  double bound2_;
  std::shared_ptr<const ode::DenseSolution> dense_;
  double tol_;
};

// Checks t against [0, 1] allowing the domain slack, clamping inside it.
double checked_time(double t);

// Throws Error(kInvalidArgument) when the core was not solved for params.
void require_same_model(const ModelParams& params, const CoreSolution& core, ModelKind kind);

}  // namespace radner
