#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <random>

#include "error.hpp"
#include "ode.hpp"

using namespace radner;
using ode::IvpSpec;

namespace {

IvpSpec scalar(ode::Rhs rhs, double y0, double t0, double t1, double tol) {
  IvpSpec spec;
  spec.dimension = 1;
  spec.rhs = std::move(rhs);
  spec.y0 = {y0};
  spec.t_start = t0;
  spec.t_end = t1;
  spec.rel_tol = tol;
  spec.abs_tol = tol;
  return spec;
}

IvpSpec exponential(double tol) {
  return scalar([](double, std::span<const double> y, std::span<double> d) { d[0] = y[0]; }, 1.0,
                0.0, 1.0, tol);
}

// A mildly nonlinear two-dimensional system with a known smooth solution
// family; used where no closed form is needed.
IvpSpec pendulum(double tol) {
  IvpSpec spec;
  spec.dimension = 2;
  spec.rhs = [](double t, std::span<const double> y, std::span<double> d) {
    d[0] = y[1];
    d[1] = -std::sin(y[0]) + 0.3 * std::cos(2.0 * t);
  };
  spec.y0 = {1.0, 0.0};
  spec.t_start = 0.0;
  spec.t_end = 3.0;
  spec.rel_tol = tol;
  spec.abs_tol = tol;
  return spec;
}

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::kInvalidArgument;
}

// exp(A t) for a real 2x2 matrix via the Cayley-Hamilton form.
std::array<double, 4> expm2(const std::array<double, 4>& A, double t) {
  using C = std::complex<double>;
  const double tau = 0.5 * (A[0] + A[3]);
  const double det = A[0] * A[3] - A[1] * A[2];
  const C delta = std::sqrt(C(tau * tau - det));
  const C dt = delta * t;
  const C ch = std::cosh(dt);
  const C sh_over = std::abs(delta) < 1e-14 ? C(t) : std::sinh(dt) / delta;
  const double e = std::exp(tau * t);
  const double c = e * ch.real();
  const double s = e * sh_over.real();
  return {c + s * (A[0] - tau), s * A[1], s * A[2], c + s * (A[3] - tau)};
}

}  // namespace

TEST_CASE("zero field keeps the initial value") {
  const auto sol = ode::integrate(
      scalar([](double, std::span<const double>, std::span<double> d) { d[0] = 0.0; }, 3.25, 0.0,
             1.0, 1e-10));
  for (double t : {0.0, 0.1, 0.5, 0.77, 1.0}) CHECK(sol.eval(t, 0) == 3.25);
}

TEST_CASE("exponential growth reaches e") {
  for (double tol : {1e-6, 1e-8, 1e-10}) {
    const auto sol = ode::integrate(exponential(tol));
    CHECK(std::abs(sol.eval(1.0, 0) / std::exp(1.0) - 1.0) < tol);
    CHECK(std::abs(sol.eval(0.5, 0) / std::exp(0.5) - 1.0) < tol);
    CHECK(sol.eval(0.0, 0) == 1.0);
  }
}

TEST_CASE("knots reproduce the stored states bit for bit") {
  const auto sol = ode::integrate(pendulum(1e-9));
  const auto knots = sol.knots();
  REQUIRE(knots.size() > 5);
  for (std::size_t i = 0; i < knots.size(); ++i) {
    const auto stored = sol.state_at_knot(i);
    const auto value = sol.eval(knots[i]);
    for (std::size_t c = 0; c < 2; ++c) CHECK(value[c] == stored[c]);
  }
  CHECK(sol.t_start() == 0.0);
  CHECK(sol.t_end() == 3.0);
  for (std::size_t i = 1; i < knots.size(); ++i) CHECK(knots[i] > knots[i - 1]);
}

TEST_CASE("interpolant is continuous across knots") {
  const auto sol = ode::integrate(pendulum(1e-9));
  const auto knots = sol.knots();
  for (std::size_t i = 1; i + 1 < knots.size(); ++i) {
    const double k = knots[i];
    const double left = std::nextafter(k, -1.0);
    const double right = std::nextafter(k, 10.0);
    for (std::size_t c = 0; c < 2; ++c) {
      CHECK(std::abs(sol.eval(left, c) - sol.eval(k, c)) < 1e-12);
      CHECK(std::abs(sol.eval(right, c) - sol.eval(k, c)) < 1e-12);
    }
  }
}

TEST_CASE("evaluation outside the span is rejected") {
  const auto sol = ode::integrate(exponential(1e-8));
  CHECK(code_of([&] { sol.eval(1.0 + 1e-9); }) == ErrorCode::kOutOfDomain);
  CHECK(code_of([&] { sol.eval(-1e-9, 0); }) == ErrorCode::kOutOfDomain);
  CHECK(code_of([&] { sol.derivative(2.0); }) == ErrorCode::kOutOfDomain);
  CHECK_NOTHROW(sol.eval(1.0 + 0.5e-12));
}

TEST_CASE("non-finite right-hand side is reported") {
  auto spec = scalar(
      [](double t, std::span<const double>, std::span<double> d) {
        d[0] = t > 0.5 ? std::numeric_limits<double>::quiet_NaN() : 1.0;
      },
      0.0, 0.0, 1.0, 1e-8);
  CHECK(code_of([&] { ode::integrate(spec); }) == ErrorCode::kNonFiniteRhs);
}

TEST_CASE("finite-time blow-up underflows the step size") {
  // y' = y^2, y(0) = 1 explodes at t = 1.
  auto spec = scalar([](double, std::span<const double> y, std::span<double> d) { d[0] = y[0] * y[0]; },
                     1.0, 0.0, 2.0, 1e-8);
  const ErrorCode code = code_of([&] { ode::integrate(spec); });
  CHECK((code == ErrorCode::kStepSizeUnderflow || code == ErrorCode::kNonFiniteRhs));
}

TEST_CASE("malformed problems are rejected") {
  auto spec = exponential(1e-8);
  spec.t_end = 0.0;
  CHECK(code_of([&] { ode::integrate(spec); }) == ErrorCode::kInvalidArgument);
  spec = exponential(1e-8);
  spec.rel_tol = 0.0;
  CHECK(code_of([&] { ode::integrate(spec); }) == ErrorCode::kInvalidArgument);
  spec = exponential(1e-8);
  spec.y0 = {1.0, 2.0};
  CHECK(code_of([&] { ode::integrate(spec); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("dense derivative matches the field at random points") {
  for (double tol : {1e-8, 1e-10}) {
    const auto spec = pendulum(tol);
    const auto sol = ode::integrate(spec);
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(spec.t_start, spec.t_end);
    double worst = 0.0;
    for (int k = 0; k < 10000; ++k) {
      const double t = u(gen);
      const auto y = sol.eval(t);
      const auto dy = sol.derivative(t);
      std::array<double, 2> f{};
      spec.rhs(t, y, f);
      for (std::size_t c = 0; c < 2; ++c) {
        worst = std::max(worst, std::abs(dy[c] - f[c]) / (1.0 + std::abs(y[c])));
      }
    }
    INFO("tol = " << tol << " worst scaled residual = " << worst);
    CHECK(worst < 100.0 * tol);
  }
}

TEST_CASE("affine systems match the matrix exponential") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  int tested = 0;
  while (tested < 25) {
    const std::array<double, 4> A = {u(gen), u(gen), u(gen), u(gen)};
    const double tr = A[0] + A[3];
    const double det = A[0] * A[3] - A[1] * A[2];
    if (!(tr < -0.1 && det > 0.1)) continue;
    ++tested;
    const std::array<double, 2> b = {u(gen), u(gen)};
    const std::array<double, 2> y0 = {u(gen), u(gen)};
    for (double tol : {1e-8, 1e-10}) {
      IvpSpec spec;
      spec.dimension = 2;
      spec.rhs = [A, b](double, std::span<const double> y, std::span<double> d) {
        d[0] = A[0] * y[0] + A[1] * y[1] + b[0];
        d[1] = A[2] * y[0] + A[3] * y[1] + b[1];
      };
      spec.y0 = {y0[0], y0[1]};
      spec.t_end = 2.0;
      spec.rel_tol = tol;
      spec.abs_tol = tol;
      const auto sol = ode::integrate(spec);
      // Equilibrium y* = -A^{-1} b; y(t) = y* + e^{At} (y0 - y*).
      const std::array<double, 2> ys = {-(A[3] * b[0] - A[1] * b[1]) / det,
                                        -(-A[2] * b[0] + A[0] * b[1]) / det};
      for (double t : {0.0, 0.25, 0.5, 1.0, 1.37, 2.0}) {
        const auto E = expm2(A, t);
        const double d0 = y0[0] - ys[0], d1 = y0[1] - ys[1];
        const std::array<double, 2> exact = {ys[0] + E[0] * d0 + E[1] * d1,
                                             ys[1] + E[2] * d0 + E[3] * d1};
        for (std::size_t c = 0; c < 2; ++c) {
          CHECK(std::abs(sol.eval(t, c) - exact[c]) <= 10.0 * tol * std::max(1.0, std::abs(exact[c])));
        }
      }
    }
  }
}

TEST_CASE("halving the tolerances stays within the coarse error estimate") {
  for (double tol : {1e-8, 1e-10, 1e-12}) {
    const auto coarse = ode::integrate(pendulum(tol));
    const auto fine = ode::integrate(pendulum(0.5 * tol));
    double worst_ratio = 0.0;
    for (int k = 0; k <= 1000; ++k) {
      const double t = 3.0 * k / 1000.0;
      const auto est = coarse.error_estimate(t);
      for (std::size_t c = 0; c < 2; ++c) {
        const double change = std::abs(coarse.eval(t, c) - fine.eval(t, c));
        // Rounding floor for values of order one.
        const double budget = est[c] + 1e-14;
        worst_ratio = std::max(worst_ratio, change / budget);
      }
    }
    INFO("tol = " << tol << " worst change / estimate = " << worst_ratio);
    CHECK(worst_ratio < 1.0);
  }
}

TEST_CASE("step cap is honoured") {
  auto spec = exponential(1e-6);
  spec.max_step = 0.01;
  const auto sol = ode::integrate(spec);
  const auto knots = sol.knots();
  for (std::size_t i = 1; i < knots.size(); ++i) CHECK(knots[i] - knots[i - 1] <= 0.01 + 1e-15);
  CHECK(sol.stats().accepted == knots.size() - 1);
  CHECK(sol.stats().rhs_evaluations > 0);
}

TEST_CASE("integration is deterministic") {
  const auto a = ode::integrate(pendulum(1e-9));
  const auto b = ode::integrate(pendulum(1e-9));
  REQUIRE(a.knots().size() == b.knots().size());
  for (double t : {0.3, 1.1, 2.9}) CHECK(a.eval(t, 0) == b.eval(t, 0));
}
