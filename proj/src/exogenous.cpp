#include "exogenous.hpp"

#include <utility>

#include "error.hpp"

namespace radner {

CoreSolution solve_core_exogenous(const ModelParams& p, double tol) {
  p.validate();
  const double a = p.a;
  const double I = p.I;
  const double sy2 = p.noise_var();
  const double c1 = p.risk_var() / (2.0 * I);
  const double c2 = p.risk_var() / (6.0 * I * I);

  ode::IvpSpec spec;
  spec.dimension = 3;
  spec.y0.assign(3, 0.0);
  spec.rel_tol = tol;
  spec.abs_tol = tol;
  spec.max_step = core_max_step(tol);
  spec.rhs = [=](double s, std::span<const double> y, std::span<double> dy) {
    const double z1 = c1 * s * s - y[0];
    const double z2 = c2 * s * s * s - y[1];
    dy[0] = 2.0 * a * sy2 * z1 * z2;
    dy[1] = y[0] / I + 2.0 * a * sy2 * z2 * z2;
    dy[2] = z2;
  };
  return CoreSolution(ModelKind::kExogenous, p, c1, c2, ode::integrate(spec), tol);
}

std::string_view ExogenousCoefficients::name(Fn fn) {
  switch (fn) {
    case Fn::alpha: return "alpha";
    case Fn::beta: return "beta";
    case Fn::mu: return "mu";
    case Fn::g1: return "g1";
    case Fn::g2: return "g2";
    case Fn::g3: return "g3";
    case Fn::g22: return "g22";
    case Fn::g23: return "g23";
    case Fn::g33: return "g33";
  }
  return "?";
}

ExogenousCoefficients::ExogenousCoefficients(const ModelParams& p, CoreSolution core)
    : params_(p), core_(std::move(core)) {
  require_same_model(p, core_, ModelKind::kExogenous);
  const double I = p.I;
  alpha_slope_ = p.risk_var() / I;
  mu_slope_ = -alpha_slope_ * p.Sigma;
  g22_slope_ = p.risk_var() / (2.0 * I * I);
  g2_slope_ = -2.0 * g22_slope_ * p.Sigma;
  g1_slope_ = g22_slope_ * p.Sigma * p.Sigma;
}

double ExogenousCoefficients::value(Fn fn, double t) const {
  t = checked_time(t);
  const double s = 1.0 - t;
  const double I = params_.I;
  switch (fn) {
    case Fn::alpha: return alpha_slope_ * s;
    case Fn::beta: return core_.z1(s);
    case Fn::mu: return mu_slope_ * s;
    case Fn::g1:
      return g1_slope_ * s + params_.noise_var() * core_.quadrature(Quadrature::kG33, s);
    case Fn::g2: return g2_slope_ * s;
    case Fn::g3: return -params_.Sigma / I * core_.z1(s);
    case Fn::g22: return g22_slope_ * s;
    case Fn::g23: return core_.z1(s) / I;
    case Fn::g33: return core_.z2(s);
  }
  return 0.0;
}

double ExogenousCoefficients::rate(Fn fn, double t) const {
  t = checked_time(t);
  const double s = 1.0 - t;
  const double I = params_.I;
  switch (fn) {
    case Fn::alpha: return -alpha_slope_;
    case Fn::beta: return -core_.z1_rate(s);
    case Fn::mu: return -mu_slope_;
    case Fn::g1:
      return -g1_slope_ - params_.noise_var() * core_.quadrature_rate(Quadrature::kG33, s);
    case Fn::g2: return -g2_slope_;
    case Fn::g3: return params_.Sigma / I * core_.z1_rate(s);
    case Fn::g22: return -g22_slope_;
    case Fn::g23: return -core_.z1_rate(s) / I;
    case Fn::g33: return -core_.z2_rate(s);
  }
  return 0.0;
}

ExogenousCoefficients build_coefficients_exogenous(const ModelParams& params,
                                                   const CoreSolution& core) {
  return ExogenousCoefficients(params, core);
}

ExogenousCoefficients solve_exogenous(const ModelParams& params, double tol) {
  return ExogenousCoefficients(params, solve_core_exogenous(params, tol));
}

double investor_strategy_exogenous(const ModelParams& p, double t, double Y) {
  checked_time(t);
  return (p.Sigma - Y) / p.I;
}

}  // namespace radner
