#include "ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "error.hpp"

namespace radner::ode {
namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Continuous extension weights.
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

// PI step-size controller constants.
constexpr double kSafety = 0.9;
constexpr double kBeta = 0.04;
constexpr double kExpo = 0.2 - kBeta * 0.75;
constexpr double kMinShrink = 0.2;  // h_new >= 0.2 h
constexpr double kMaxGrow = 10.0;   // h_new <= 10 h
constexpr std::size_t kMaxSteps = 10'000'000;
// Midpoint derivative mismatch allowed, in units of the error weight.
constexpr double kDenseBudget = 25.0;

class Evaluator {
 public:
  Evaluator(const IvpSpec& spec, IntegrationStats& stats) : spec_(spec), stats_(stats) {}

  void operator()(double t, std::span<const double> y, std::span<double> dydt) {
    spec_.rhs(t, y, dydt);
    ++stats_.rhs_evaluations;
    for (double v : dydt) {
      if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << "right-hand side returned a non-finite value at t = " << t;
        throw Error(ErrorCode::kNonFiniteRhs, msg.str());
      }
    }
  }

 private:
  const IvpSpec& spec_;
  IntegrationStats& stats_;
};

void validate(const IvpSpec& spec) {
  if (spec.dimension == 0 || spec.y0.size() != spec.dimension) {
    throw Error(ErrorCode::kInvalidArgument, "initial state does not match the dimension");
  }
  if (!spec.rhs) throw Error(ErrorCode::kInvalidArgument, "missing right-hand side");
  if (!(spec.t_start < spec.t_end)) {
    throw Error(ErrorCode::kInvalidArgument, "time span must be increasing");
  }
  if (!(spec.rel_tol > 0.0) || !(spec.abs_tol > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tolerances must be positive");
  }
  for (double v : spec.y0) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, "initial state is not finite");
  }
}

// Starting step heuristic of Hairer, Norsett and Wanner (DOPRI5 hinit).
double initial_step(const IvpSpec& spec, Evaluator& f, std::span<const double> f0, double hmax) {
  const std::size_t n = spec.dimension;
  double dnf = 0.0, dny = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sk = spec.abs_tol + spec.rel_tol * std::abs(spec.y0[i]);
    dnf += (f0[i] / sk) * (f0[i] / sk);
    dny += (spec.y0[i] / sk) * (spec.y0[i] / sk);
  }
  double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
  h = std::min(h, hmax);

  State y1(n), f1(n);
  for (std::size_t i = 0; i < n; ++i) y1[i] = spec.y0[i] + h * f0[i];
  f(spec.t_start + h, y1, f1);
  double der2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sk = spec.abs_tol + spec.rel_tol * std::abs(spec.y0[i]);
    const double d = (f1[i] - f0[i]) / sk;
    der2 += d * d;
  }
  der2 = std::sqrt(der2) / h;
  const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
  const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 0.2);
  return std::min({100.0 * h, h1, hmax});
}

}  // namespace

std::span<const double> DenseSolution::state_at_knot(std::size_t i) const {
  return {&states_[i * dim_], dim_};
}

std::size_t DenseSolution::locate(double t) const {
  if (!(t >= knots_.front() - kDomainSlack && t <= knots_.back() + kDomainSlack)) {
    std::ostringstream msg;
    msg << "t = " << t << " outside [" << knots_.front() << ", " << knots_.back() << "]";
    throw Error(ErrorCode::kOutOfDomain, msg.str());
  }
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
  if (it == knots_.begin()) return 0;
  const auto idx = static_cast<std::size_t>(it - knots_.begin()) - 1;
  return std::min(idx, knots_.size() - 2);
}

double DenseSolution::eval(double t, std::size_t c) const {
  const std::size_t i = locate(t);
  if (t == knots_[i]) return states_[i * dim_ + c];
  if (t == knots_[i + 1]) return states_[(i + 1) * dim_ + c];
  const double h = knots_[i + 1] - knots_[i];
  const double u = std::clamp((t - knots_[i]) / h, 0.0, 1.0);
  const double v = 1.0 - u;
  const double* r = coeffs(i);
  const double r2 = r[c], r3 = r[dim_ + c], r4 = r[2 * dim_ + c], r5 = r[3 * dim_ + c];
  return states_[i * dim_ + c] + u * (r2 + v * (r3 + u * (r4 + v * r5)));
}

State DenseSolution::eval(double t) const {
  State out(dim_);
  for (std::size_t c = 0; c < dim_; ++c) out[c] = eval(t, c);
  return out;
}

double DenseSolution::derivative(double t, std::size_t c) const {
  const std::size_t i = locate(t);
  const double h = knots_[i + 1] - knots_[i];
  const double u = std::clamp((t - knots_[i]) / h, 0.0, 1.0);
  const double v = 1.0 - u;
  const double* r = coeffs(i);
  const double r2 = r[c], r3 = r[dim_ + c], r4 = r[2 * dim_ + c], r5 = r[3 * dim_ + c];
  // y = y0 + u*C, C = r2 + v*B, B = r3 + u*A, A = r4 + v*r5
  const double a = r4 + v * r5;
  const double da = -r5;
  const double b = r3 + u * a;
  const double db = a + u * da;
  const double cc = r2 + v * b;
  const double dc = -b + v * db;
  return (cc + u * dc) / h;
}

State DenseSolution::derivative(double t) const {
  State out(dim_);
  for (std::size_t c = 0; c < dim_; ++c) out[c] = derivative(t, c);
  return out;
}

State DenseSolution::error_estimate(double t) const {
  const std::size_t i = locate(t);
  const bool at_knot = t == knots_[i] || t == knots_[i + 1];
  const std::size_t k = (t == knots_[i]) ? i : i + 1;
  State out(errors_.begin() + static_cast<std::ptrdiff_t>(k * dim_),
            errors_.begin() + static_cast<std::ptrdiff_t>((k + 1) * dim_));
  if (!at_knot) {
    // Interpolation allowance: the largest gap over the interval between the
    // continuous extension and the cubic Hermite interpolant, u^2 v^2 r5.
    const double* r = coeffs(i);
    for (std::size_t c = 0; c < dim_; ++c) out[c] += std::abs(r[3 * dim_ + c]) / 16.0;
  }
  return out;
}

DenseSolution integrate(const IvpSpec& spec) {
  validate(spec);
  const std::size_t n = spec.dimension;
  const double span = spec.t_end - spec.t_start;
  const double hmax = spec.max_step > 0.0 ? std::min(spec.max_step, span) : span;
  const double hmin = 1e-12 * span;

  DenseSolution sol;
  sol.dim_ = n;
  Evaluator f(spec, sol.stats_);

  State y = spec.y0;
  State k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), kmid(n), ytmp(n), ynew(n), err(n);
  State rc(4 * n);
  State acc_err(n, 0.0);
  double global_err = 0.0;

  sol.knots_.push_back(spec.t_start);
  sol.states_.insert(sol.states_.end(), y.begin(), y.end());
  sol.errors_.insert(sol.errors_.end(), acc_err.begin(), acc_err.end());

  double t = spec.t_start;
  f(t, y, k1);
  double h = initial_step(spec, f, k1, hmax);
  double facold = 1e-4;
  bool last_rejected = false;

  for (std::size_t step = 0;; ++step) {
    if (step >= kMaxSteps) {
      throw Error(ErrorCode::kStepSizeUnderflow, "maximum number of steps exceeded");
    }
    bool last = false;
    if (t + 1.01 * h >= spec.t_end) {
      h = spec.t_end - t;
      last = true;
    }
    if (h < hmin) {
      std::ostringstream msg;
      msg << "step size " << h << " below " << hmin << " at t = " << t;
      throw Error(ErrorCode::kStepSizeUnderflow, msg.str());
    }

    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    f(t + c2 * h, ytmp, k2);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    f(t + c3 * h, ytmp, k3);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    f(t + c4 * h, ytmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    f(t + c5 * h, ytmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    const double tnew = last ? spec.t_end : t + h;
    f(tnew, ytmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    f(tnew, ynew, k7);

    double err_norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sk = spec.abs_tol + spec.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err_norm += (err[i] / sk) * (err[i] / sk);
    }
    err_norm = std::sqrt(err_norm / static_cast<double>(n));

    const double fac11 = std::pow(err_norm, kExpo);
    double fac = fac11 / std::pow(facold, kBeta);
    fac = std::max(1.0 / kMaxGrow, std::min(1.0 / kMinShrink, fac / kSafety));
    double hnew = h / fac;

    // Continuous extension of the candidate step.
    for (std::size_t i = 0; i < n; ++i) {
      const double ydiff = ynew[i] - y[i];
      const double bspl = h * k1[i] - ydiff;
      rc[i] = ydiff;
      rc[n + i] = bspl;
      rc[2 * n + i] = ydiff - h * k7[i] - bspl;
      rc[3 * n + i] =
          h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
    }

    // The derivative of the interpolant is one order less accurate than its
    // values. Check it against the field at the midpoint.
    double dense_ratio = 0.0;
    if (err_norm <= 1.0 && spec.control_dense_derivative) {
      for (std::size_t i = 0; i < n; ++i) {
        ytmp[i] = y[i] + 0.5 * (rc[i] + 0.5 * (rc[n + i] + 0.5 * (rc[2 * n + i] +
                                                                   0.5 * rc[3 * n + i])));
      }
      f(t + 0.5 * h, ytmp, kmid);
      for (std::size_t i = 0; i < n; ++i) {
        const double a = rc[2 * n + i] + 0.5 * rc[3 * n + i];
        const double b = rc[n + i] + 0.5 * a;
        const double db = a - 0.5 * rc[3 * n + i];
        const double slope = (rc[i] + 0.5 * b + 0.5 * (-b + 0.5 * db)) / h;
        const double sk = spec.abs_tol + spec.rel_tol * std::abs(ytmp[i]);
        dense_ratio = std::max(dense_ratio, std::abs(slope - kmid[i]) / (kDenseBudget * sk));
      }
    }

    if (err_norm <= 1.0 && dense_ratio <= 1.0) {
      facold = std::max(err_norm, 1e-4);
      ++sol.stats_.accepted;
      sol.coeffs_.insert(sol.coeffs_.end(), rc.begin(), rc.end());

      // Local errors are carried forward with the growth rate of the field
      // seen over the step, so the estimate bounds the global error rather
      // than just summing the local ones.
      double dy = 0.0, df = 0.0, local = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        dy = std::max(dy, std::abs(ynew[i] - y[i]));
        df = std::max(df, std::abs(k7[i] - k1[i]));
        local = std::max(local, std::abs(err[i]));
      }
      const double lipschitz = dy > 0.0 ? df / dy : 0.0;
      global_err = global_err * std::exp(h * lipschitz) + local;
      std::fill(acc_err.begin(), acc_err.end(), global_err);
      t = tnew;
      y = ynew;
      k1 = k7;
      sol.knots_.push_back(t);
      sol.states_.insert(sol.states_.end(), y.begin(), y.end());
      sol.errors_.insert(sol.errors_.end(), acc_err.begin(), acc_err.end());
      if (last) break;

      hnew = std::min(hnew, hmax);
      if (last_rejected) hnew = std::min(hnew, h);
      last_rejected = false;
    } else if (err_norm <= 1.0) {
      hnew = h * std::max(kMinShrink, kSafety * std::pow(dense_ratio, -0.25));
      last_rejected = true;
      ++sol.stats_.rejected;
    } else {
      hnew = h / std::min(1.0 / kMinShrink, fac11 / kSafety);
      last_rejected = true;
      ++sol.stats_.rejected;
    }
    h = hnew;
  }
  return sol;
}

}  // namespace radner::ode
