#include "endogenous.hpp"

#include <cmath>
#include <utility>

#include "error.hpp"

namespace radner {

CoreSolution solve_core(const ModelParams& p, double tol) {
  p.validate();
  const double a = p.a;
  const double I = p.I;
  const double kappa = p.kappa;
  const double sy2 = p.noise_var();
  const double P = p.tracker_scale();
  const double asd2 = p.risk_var();
  const double c1 = a * kappa * p.sigma_D * p.sigma_D / P;
  const double c2 = 2.0 * a * kappa * kappa * p.sigma_D * p.sigma_D / (3.0 * P * P);
  const double k3 = 4.0 * a * a * I * kappa * p.Sigma * p.sigma_D * p.sigma_D * sy2 / P;
  const double k23 = 8.0 * a * I * I * kappa * kappa * sy2 / P;
  const double k33 = 4.0 * a * a * I * I * kappa * sy2 * sy2;
  const double f_curv = 4.0 * I * I * kappa * kappa * kappa / (P * P) - kappa;

  ode::IvpSpec spec;
  spec.dimension = 7;
  spec.y0.assign(7, 0.0);
  spec.t_start = 0.0;
  spec.t_end = 1.0;
  spec.rel_tol = tol;
  spec.abs_tol = tol;
  spec.max_step = core_max_step(tol);
  spec.rhs = [=](double s, std::span<const double> y, std::span<double> dy) {
    const double z1 = c1 * s * s - y[0];
    const double z2 = c2 * s * s * s - y[1];
    const double q = P + a * sy2 * z1 * z1;
    const double w = P * P + a * sy2 * z1 * z1 * (asd2 + 4.0 * I * kappa);
    // Deficit rates: C1 s^2 - z1 and C2 s^3 - z2.
    dy[0] = 4.0 * a * kappa * I * sy2 * z1 * z2 / q;
    dy[1] = 2.0 * kappa * y[0] / P + 2.0 * a * sy2 * w * z2 * z2 / (q * q);
    dy[2] = z2;
    dy[3] = k3 * z2 * z1 / q;
    dy[4] = k23 * z2 * z1 / q;
    dy[5] = f_curv * s * s + y[4] + k33 * z2 * z2 * z1 * z1 / (q * q);
    dy[6] = y[5];
  };
  return CoreSolution(ModelKind::kEndogenous, p, c1, c2, ode::integrate(spec), tol);
}

std::string_view EndogenousCoefficients::name(Fn fn) {
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
    case Fn::f1: return "f1";
    case Fn::f2: return "f2";
    case Fn::f3: return "f3";
    case Fn::f22: return "f22";
    case Fn::f23: return "f23";
    case Fn::f33: return "f33";
  }
  return "?";
}

EndogenousCoefficients::EndogenousCoefficients(const ModelParams& p, CoreSolution core)
    : params_(p), core_(std::move(core)) {
  require_same_model(p, core_, ModelKind::kEndogenous);
  const double a = p.a, I = p.I, kappa = p.kappa, Sigma = p.Sigma;
  const double sd2 = p.sigma_D * p.sigma_D;
  const double P = p.tracker_scale();
  alpha_slope_ = 2.0 * a * kappa * sd2 / P;
  mu_slope_ = -alpha_slope_ * Sigma;
  g22_slope_ = 2.0 * a * kappa * kappa * sd2 / (P * P);
  g2_slope_ = -2.0 * g22_slope_ * Sigma;
  g23_factor_ = 2.0 * kappa / P;
  g3_factor_ = -g23_factor_ * Sigma;
  g1_slope_ = g22_slope_ * Sigma * Sigma;
  f1_slope_ = a * a * kappa * sd2 * sd2 * Sigma * Sigma / (P * P);
  f2_slope_ = 4.0 * a * I * kappa * kappa * sd2 * Sigma / (P * P);
  f3_curv_ = 0.5 * f2_slope_;
  f22_slope_ = 4.0 * I * I * kappa * kappa * kappa / (P * P) - kappa;
}

double EndogenousCoefficients::value(Fn fn, double t) const {
  t = checked_time(t);
  const double s = 1.0 - t;
  const double sy2 = params_.noise_var();
  switch (fn) {
    case Fn::alpha: return alpha_slope_ * s;
    case Fn::beta: return core_.z1(s);
    case Fn::mu: return mu_slope_ * s;
    case Fn::g1: return g1_slope_ * s + sy2 * core_.quadrature(Quadrature::kG33, s);
    case Fn::g2: return g2_slope_ * s;
    case Fn::g3: return g3_factor_ * core_.z1(s);
    case Fn::g22: return g22_slope_ * s;
    case Fn::g23: return g23_factor_ * core_.z1(s);
    case Fn::g33: return core_.z2(s);
    case Fn::f1: return f1_slope_ * s + sy2 * core_.quadrature(Quadrature::kF1, s);
    case Fn::f2: return f2_slope_ * s;
    case Fn::f3: return f3_curv_ * s * s + core_.quadrature(Quadrature::kF3, s);
    case Fn::f22: return f22_slope_ * s;
    case Fn::f23: return f22_slope_ * s * s + core_.quadrature(Quadrature::kF23, s);
    case Fn::f33: return core_.quadrature(Quadrature::kF33, s);
  }
  return 0.0;
}

double EndogenousCoefficients::rate(Fn fn, double t) const {
  t = checked_time(t);
  const double s = 1.0 - t;
  const double sy2 = params_.noise_var();
  // d/dt = -d/ds
  switch (fn) {
    case Fn::alpha: return -alpha_slope_;
    case Fn::beta: return -core_.z1_rate(s);
    case Fn::mu: return -mu_slope_;
    case Fn::g1: return -g1_slope_ - sy2 * core_.quadrature_rate(Quadrature::kG33, s);
    case Fn::g2: return -g2_slope_;
    case Fn::g3: return -g3_factor_ * core_.z1_rate(s);
    case Fn::g22: return -g22_slope_;
    case Fn::g23: return -g23_factor_ * core_.z1_rate(s);
    case Fn::g33: return -core_.z2_rate(s);
    case Fn::f1: return -f1_slope_ - sy2 * core_.quadrature_rate(Quadrature::kF1, s);
    case Fn::f2: return -f2_slope_;
    case Fn::f3: return -2.0 * f3_curv_ * s - core_.quadrature_rate(Quadrature::kF3, s);
    case Fn::f22: return -f22_slope_;
    case Fn::f23: return -2.0 * f22_slope_ * s - core_.quadrature_rate(Quadrature::kF23, s);
    case Fn::f33: return -core_.quadrature_rate(Quadrature::kF33, s);
  }
  return 0.0;
}

EndogenousCoefficients build_coefficients(const ModelParams& params, const CoreSolution& core) {
  return EndogenousCoefficients(params, core);
}

EndogenousCoefficients solve_endogenous(const ModelParams& params, double tol) {
  return EndogenousCoefficients(params, solve_core(params, tol));
}

namespace {

// 2 a sigma_Yp^2 beta g33 / (a sigma_D^2 + a sigma_Yp^2 beta^2 + 2 I kappa)
double noise_rate_loading(const EndogenousCoefficients& c, double t) {
  const ModelParams& p = c.params();
  const double beta = c.beta(t);
  const double g33 = c.value(EndogenousCoefficients::Fn::g33, t);
  const double q = p.tracker_scale() + p.a * p.noise_var() * beta * beta;
  return 2.0 * p.a * p.noise_var() * beta * g33 / q;
}

}  // namespace

double investor_strategy(const EndogenousCoefficients& c, double t, double Y, double Yp) {
  t = checked_time(t);
  const ModelParams& p = c.params();
  return 2.0 * p.kappa * (p.Sigma - Y) / p.tracker_scale() - noise_rate_loading(c, t) * Yp;
}

double tracker_strategy(const EndogenousCoefficients& c, double t, double Y, double Yp) {
  t = checked_time(t);
  const ModelParams& p = c.params();
  return (2.0 * p.I * p.kappa * Y + p.risk_var() * p.Sigma) / p.tracker_scale() +
         p.I * noise_rate_loading(c, t) * Yp;
}

UtilityValue exponential_value(double a, double ce) {
  const double exponent = -a * ce;
  if (std::abs(exponent) > kExponentLimit || std::isnan(exponent)) {
    const double clamped = exponent > 0.0 ? kExponentLimit : -kExponentLimit;
    return {-std::exp(clamped), true};
  }
  return {-std::exp(exponent), false};
}

UtilityValue investor_value(const EndogenousCoefficients& c, double t, double x, double Y,
                            double Yp) {
  return exponential_value(c.params().a, investor_certainty_equivalent(c, t, x, Y, Yp));
}

double tracker_value(const EndogenousCoefficients& c, double t, double x, double Y, double Yp) {
  using F = EndogenousCoefficients::Fn;
  t = checked_time(t);
  return x + c.value(F::f1, t) + c.value(F::f2, t) * Y + c.value(F::f3, t) * Yp +
         c.value(F::f22, t) * Y * Y + c.value(F::f23, t) * Y * Yp + c.value(F::f33, t) * Yp * Yp;
}

}  // namespace radner
