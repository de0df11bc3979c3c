#include "verification.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "error.hpp"
#include "philox.hpp"

namespace radner::verify {
namespace {

template <class Coeffs>
ResidualReport residual_scan(const Coeffs& c, std::size_t grid_size, ModelKind model,
                             std::vector<double> (*rhs)(const Coeffs&, double)) {
  if (grid_size < 11) throw Error(ErrorCode::kInvalidArgument, "grid_size must be >= 11");
  using F = typename Coeffs::Fn;
  constexpr auto& fns = Coeffs::kAll;

  ResidualReport report;
  report.model = model;
  for (F fn : fns) report.rows.push_back({std::string(Coeffs::name(fn)), 0.0, 0.0, 0.0});

  const double t_last = 1.0 - kEndpointGap;
  const double h = kFiniteDifferenceStep;
  for (std::size_t k = 0; k < grid_size; ++k) {
    const double t = t_last * static_cast<double>(k) / static_cast<double>(grid_size - 1);
    const std::vector<double> r = rhs(c, t);
    for (std::size_t e = 0; e < fns.size(); ++e) {
      const double res = std::abs(c.rate(fns[e], t) - r[e]);
      ResidualRow& row = report.rows[e];
      if (res > row.max_residual || std::isnan(res)) {
        row.max_residual = res;
        row.argmax_t = t;
      }
      // central, or second-order one-sided where t - h leaves the domain
      const double fd =
          t >= h ? (c.value(fns[e], t + h) - c.value(fns[e], t - h)) / (2.0 * h)
                 : (-3.0 * c.value(fns[e], t) + 4.0 * c.value(fns[e], t + h) -
                    c.value(fns[e], t + 2.0 * h)) / (2.0 * h);
      row.fd_residual = std::max(row.fd_residual, std::abs(fd - r[e]));
    }
  }

  const std::vector<double> r1 = rhs(c, 1.0);
  for (std::size_t e = 0; e < fns.size(); ++e) {
    const double term = std::abs(c.value(fns[e], 1.0));
    if (term >= report.terminal_max) {
      report.terminal_max = term;
      report.terminal_worst = report.rows[e].equation;
    }
    const double res = std::abs(c.rate(fns[e], 1.0) - r1[e]);
    if (res >= report.endpoint_max) {
      report.endpoint_max = res;
      report.endpoint_worst = report.rows[e].equation;
    }
  }
  return report;
}

struct Sample {
  double t, Y, Yp;
};

Sample draw_state(rng::NormalStream& stream) {
  Sample s;
  s.t = (1.0 - 1e-3) * stream.uniform();
  s.Y = 3.0 * stream.normal();
  s.Yp = 3.0 * stream.normal();
  return s;
}

std::string where(double t, double Y, double Yp) {
  std::ostringstream msg;
  msg.precision(17);
  msg << " at (t, Y, Yp) = (" << t << ", " << Y << ", " << Yp << ")";
  return msg.str();
}

}  // namespace

const ResidualRow& ResidualReport::worst() const {
  if (rows.empty()) throw Error(ErrorCode::kInvalidArgument, "empty residual report");
  return *std::max_element(rows.begin(), rows.end(), [](const auto& x, const auto& y) {
    return x.max_residual < y.max_residual || std::isnan(y.max_residual);
  });
}

void ResidualReport::require_below(double tol) const {
  const ResidualRow& w = worst();
  if (!(w.max_residual < tol)) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "equation " << w.equation << " residual " << w.max_residual << " at t = " << w.argmax_t
        << " exceeds " << tol;
    throw Error(ErrorCode::kResidualExceedsTolerance, msg.str());
  }
}

std::vector<double> endogenous_rhs(const EndogenousCoefficients& c, double t) {
  using F = EndogenousCoefficients::Fn;
  const ModelParams& p = c.params();
  const double a = p.a, I = p.I, k = p.kappa, S = p.Sigma;
  const double sd2 = p.sigma_D * p.sigma_D, sy2 = p.noise_var();
  const double al = c.value(F::alpha, t), be = c.value(F::beta, t);
  const double g2 = c.value(F::g2, t), g3 = c.value(F::g3, t), g22 = c.value(F::g22, t);
  const double g23 = c.value(F::g23, t), g33 = c.value(F::g33, t);
  const double f2 = c.value(F::f2, t), f22 = c.value(F::f22, t), f23 = c.value(F::f23, t);
  const double f33 = c.value(F::f33, t);

  const double q = a * sd2 + a * sy2 * be * be + 2.0 * I * k;
  const double q2 = q * q;
  const double w = a * sy2 * be * be * (a * sd2 + 4.0 * I * k) + std::pow(a * sd2 + 2.0 * I * k, 2);
  const double v = sd2 + sy2 * be * be;
  const double supply = sy2 * be * (I * g3 + S * be) + S * sd2;
  // The f22 equation is printed with a symbol M that appears nowhere else;
  // it is read as I, which the constructed solution satisfies.
  const double M = I;

  std::vector<double> r(15);
  r[0] = -2.0 * a * k * (sy2 * be * (be - I * g23) + sd2) / q;                       // alpha
  r[1] = 4.0 * a * I * sy2 * g33 * be * k / q - al;                                  // beta
  r[2] = 2.0 * a * k * supply / q;                                                   // mu
  r[3] = a * sy2 * g3 * g3 * w / (2.0 * q2) +
         2.0 * a * S * k * (a * sy2 * g3 * be - k * S) * v / q2 - sy2 * g33;         // g1
  r[4] = a * sy2 * g23 * (g3 * w + 2.0 * a * S * be * k * v) / q2 -
         2.0 * a * k * v * (a * sy2 * g3 * be - 2.0 * S * k) / q2;                   // g2
  r[5] = 2.0 * a * sy2 * g33 * (g3 * w + 2.0 * a * S * be * k * v) / q2 - g2;        // g3
  r[6] = a * sy2 * g23 * g23 * w / (2.0 * q2) -
         2.0 * a * k * (a * sy2 * g23 * be + k) * v / q2;                            // g22
  r[7] = 2.0 * a * sy2 * g33 * (g23 * w - 2.0 * a * k * be * v) / q2 - 2.0 * g22;    // g23
  r[8] = 2.0 * a * sy2 * g33 * g33 * w / q2 - g23;                                   // g33
  r[9] = -k * std::pow(a * sy2 * be * (I * g3 + S * be) + a * S * sd2, 2) / q2 -
         sy2 * f33;                                                                  // f1
  r[10] = -2.0 * a * I * k * (a * sy2 * g23 * be + 2.0 * k) * supply / q2;           // f2
  r[11] = -4.0 * a * a * I * sy2 * g33 * be * k * supply / q2 - f2;                  // f3
  r[12] = a * k * (sy2 * be * (be - I * g23) + sd2) *
          (a * sy2 * be * (M * g23 + be) + a * sd2 + 4.0 * I * k) / q2;              // f22
  r[13] = -4.0 * a * I * I * sy2 * g33 * be * k * (a * sy2 * g23 * be + 2.0 * k) / q2 -
          2.0 * f22;                                                                 // f23
  r[14] = -4.0 * a * a * I * I * sy2 * sy2 * g33 * g33 * be * be * k / q2 - f23;     // f33
  return r;
}

std::vector<double> exogenous_rhs(const ExogenousCoefficients& c, double t) {
  using F = ExogenousCoefficients::Fn;
  const ModelParams& p = c.params();
  const double a = p.a, I = p.I, S = p.Sigma;
  const double sd2 = p.sigma_D * p.sigma_D, sy2 = p.noise_var();
  const double al = c.value(F::alpha, t), be = c.value(F::beta, t);
  const double g2 = c.value(F::g2, t), g3 = c.value(F::g3, t), g22 = c.value(F::g22, t);
  const double g23 = c.value(F::g23, t), g33 = c.value(F::g33, t);
  const double v = sd2 + sy2 * be * be;

  std::vector<double> r(9);
  r[0] = -a * (sy2 * be * (be - I * g23) + sd2) / I;                                   // alpha
  r[1] = 2.0 * a * sy2 * g33 * be - al;                                                // beta
  r[2] = a * (sy2 * be * (I * g3 + S * be) + S * sd2) / I;                             // mu
  r[3] = (a * I * I * sy2 * g3 * g3 - a * S * S * v - 2.0 * I * I * sy2 * g33) / (2.0 * I * I);
  r[4] = a * (I * I * sy2 * g23 * g3 + S * v) / (I * I);                               // g2
  r[5] = 2.0 * a * sy2 * g3 * g33 - g2;                                                // g3
  r[6] = -a * (sy2 * (be * be - I * I * g23 * g23) + sd2) / (2.0 * I * I);             // g22
  r[7] = 2.0 * a * sy2 * g23 * g33 - 2.0 * g22;                                        // g23
  r[8] = 2.0 * a * sy2 * g33 * g33 - g23;                                              // g33
  return r;
}

ResidualReport residuals_endogenous(const EndogenousCoefficients& c, std::size_t grid_size) {
  return residual_scan(c, grid_size, ModelKind::kEndogenous, &endogenous_rhs);
}

ResidualReport residuals_exogenous(const ExogenousCoefficients& c, std::size_t grid_size) {
  return residual_scan(c, grid_size, ModelKind::kExogenous, &exogenous_rhs);
}

double investor_drift_maximizer(const EndogenousCoefficients& c, double t, double Y, double Yp) {
  using F = EndogenousCoefficients::Fn;
  const ModelParams& p = c.params();
  const double a = p.a, sy2 = p.noise_var(), sd2 = p.sigma_D * p.sigma_D;
  const double be = c.value(F::beta, t);
  const double num = c.rate(F::mu, t) -
                     a * sy2 * be * (c.value(F::g23, t) * Y + c.value(F::g3, t)) +
                     c.rate(F::alpha, t) * Y +
                     (c.value(F::alpha, t) - 2.0 * a * sy2 * c.value(F::g33, t) * be +
                      c.rate(F::beta, t)) * Yp;
  return num / (a * (sd2 + sy2 * be * be));
}

double tracker_drift_maximizer(const EndogenousCoefficients& c, double t, double Y, double Yp) {
  using F = EndogenousCoefficients::Fn;
  const double k = c.params().kappa;
  return (2.0 * k * Y + c.rate(F::alpha, t) * Y +
          (c.value(F::alpha, t) + c.rate(F::beta, t)) * Yp + c.rate(F::mu, t)) /
         (2.0 * k);
}

OptimizerIdentityReport check_pointwise_optimizers(const EndogenousCoefficients& c,
                                                   std::size_t n_samples, std::uint64_t seed,
                                                   double threshold) {
  OptimizerIdentityReport report;
  report.samples = n_samples;
  rng::NormalStream stream(seed, 0, 0);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const Sample s = draw_state(stream);
    const double dev_inv =
        std::abs(investor_drift_maximizer(c, s.t, s.Y, s.Yp) - investor_strategy(c, s.t, s.Y, s.Yp));
    const double dev_tr =
        std::abs(tracker_drift_maximizer(c, s.t, s.Y, s.Yp) - tracker_strategy(c, s.t, s.Y, s.Yp));
    report.investor_max_dev = std::max(report.investor_max_dev, dev_inv);
    report.tracker_max_dev = std::max(report.tracker_max_dev, dev_tr);
    if (!(dev_inv <= threshold) || !(dev_tr <= threshold)) {
      std::ostringstream msg;
      msg.precision(6);
      msg << "drift maximizer deviates from closed-form strategy by "
          << std::max(dev_inv, dev_tr) << where(s.t, s.Y, s.Yp);
      throw Error(ErrorCode::kIdentityViolation, msg.str());
    }
  }
  return report;
}

double check_clearing(const EndogenousCoefficients& c, std::size_t n_samples, std::uint64_t seed,
                      double threshold) {
  const ModelParams& p = c.params();
  rng::NormalStream stream(seed, 0, 0);
  double worst = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const Sample s = draw_state(stream);
    const double dev = std::abs(p.I * investor_strategy(c, s.t, s.Y, s.Yp) +
                                tracker_strategy(c, s.t, s.Y, s.Yp) - p.Sigma);
    worst = std::max(worst, dev);
    if (!(dev < threshold)) {
      std::ostringstream msg;
      msg.precision(6);
      msg << "market clearing off by " << dev << where(s.t, s.Y, s.Yp);
      throw Error(ErrorCode::kClearingViolation, msg.str());
    }
  }
  return worst;
}

double check_clearing_exogenous(const ModelParams& p, std::size_t n_samples, std::uint64_t seed,
                                double threshold) {
  rng::NormalStream stream(seed, 0, 0);
  double worst = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const Sample s = draw_state(stream);
    const double dev = std::abs(p.I * investor_strategy_exogenous(p, s.t, s.Y) + s.Y - p.Sigma);
    worst = std::max(worst, dev);
    if (!(dev < threshold)) {
      std::ostringstream msg;
      msg.precision(6);
      msg << "market clearing off by " << dev << where(s.t, s.Y, s.Yp);
      throw Error(ErrorCode::kClearingViolation, msg.str());
    }
  }
  return worst;
}

BoundReport check_positivity_bounds(const CoreSolution& core, std::size_t grid_size) {
  if (grid_size < 2) throw Error(ErrorCode::kInvalidArgument, "grid_size must be >= 2");
  BoundReport report;
  report.grid_points = grid_size - 1;
  report.equality_mode = core.params().sigma_Yp == 0.0;
  report.min_z1 = report.min_z2 = report.min_z1_deficit = report.min_z2_deficit = INFINITY;
  const double c1 = core.bound1(), c2 = core.bound2();

  auto fail = [](const char* what, double s, double value) {
    std::ostringstream msg;
    msg.precision(17);
    msg << what << " at s = " << s << " (value " << value << ")";
    throw Error(ErrorCode::kBoundViolation, msg.str());
  };

  // grid of (0, 1]; s = 0 is the initial condition and excluded.
  for (std::size_t k = 1; k < grid_size; ++k) {
    const double s = static_cast<double>(k) / static_cast<double>(grid_size - 1);
    const double b1 = c1 * s * s, b2 = c2 * s * s * s;
    const double z1 = core.z1(s), z2 = core.z2(s);
    const double u1 = core.z1_deficit(s), u2 = core.z2_deficit(s);
    report.min_z1 = std::min(report.min_z1, z1 / b1);
    report.min_z2 = std::min(report.min_z2, z2 / b2);
    report.min_z1_deficit = std::min(report.min_z1_deficit, u1 / b1);
    report.min_z2_deficit = std::min(report.min_z2_deficit, u2 / b2);
    if (report.equality_mode) {
      const double gap = std::max(std::abs(z1 - b1), std::abs(z2 - b2));
      report.max_equality_gap = std::max(report.max_equality_gap, gap);
      if (!(gap <= 1e-10)) fail("closed form not attained", s, gap);
    } else {
      if (!(z1 > 0.0)) fail("z1 not positive", s, z1);
      if (!(z2 > 0.0)) fail("z2 not positive", s, z2);
      if (!(u1 > 0.0)) fail("z1 not strictly below C1 s^2", s, u1);
      if (!(u2 > 0.0)) fail("z2 not strictly below C2 s^3", s, u2);
    }
  }
  const double s0 = 1e-3;
  report.taylor_ratio = core.z1(s0) / (s0 * s0) / c1;
  if (!(std::abs(report.taylor_ratio - 1.0) <= 0.01)) {
    fail("z1(s)/s^2 does not approach z1''(0)/2", s0, report.taylor_ratio);
  }
  return report;
}

DecouplingReport check_exogenous_decoupling(const ExogenousCoefficients& c,
                                            std::size_t grid_size) {
  using F = ExogenousCoefficients::Fn;
  const ModelParams& p = c.params();
  const double sd2 = p.sigma_D * p.sigma_D;
  DecouplingReport report;
  for (std::size_t k = 0; k < grid_size; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(grid_size - 1);
    const double g1_rate = -p.a * p.Sigma * p.Sigma * sd2 / (2.0 * p.I * p.I) -
                           p.noise_var() * c.value(F::g33, t);
    const double mu = p.a * p.Sigma * sd2 / p.I * (t - 1.0);
    report.g1_rate_max_dev = std::max(report.g1_rate_max_dev, std::abs(c.rate(F::g1, t) - g1_rate));
    report.mu_max_dev = std::max(report.mu_max_dev, std::abs(c.value(F::mu, t) - mu));
  }
  return report;
}

}  // namespace radner::verify
