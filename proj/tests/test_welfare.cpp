#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "frozen.hpp"
#include "oracles.hpp"
#include "support.hpp"
#include "welfare.hpp"

using namespace radner;
using namespace radner::welfare;
using radner::testing::code_of;
using radner::testing::degenerate;

namespace {

ModelParams with_supply(ModelParams p, double sigma) {
  p.Sigma = sigma;
  return p.with_equal_holdings();
}

}  // namespace

TEST_CASE("first term at the base point") {
  const ModelParams p = ModelParams::figure1_base(1.0);
  CHECK(first_term(p) == doctest::Approx(1.0 / 204020.0).epsilon(1e-15));
  CHECK(welfare_difference(p).first_term == first_term(p));
}

TEST_CASE("direct and closed-form differences agree with the oracle") {
  for (const auto& cell : frozen::kWelfare) {
    CAPTURE(cell.a);
    CAPTURE(cell.kappa);
    ModelParams p = ModelParams::figure1_base(cell.a);
    p.kappa = cell.kappa;
    const auto r = welfare_difference(p);
    REQUIRE(r.formula_available);
    CHECK(std::abs(r.difference_direct - r.difference_formula) < 1e-8);
    CHECK(r.first_term == doctest::Approx(cell.first_term).epsilon(1e-14));
    CHECK(std::abs(r.g33_integral_gap - cell.gap) < 1e-11);
    CHECK(std::abs(r.difference_formula - cell.difference) < 1e-8);
    CHECK(std::abs(r.difference_direct - cell.difference) < 1e-8);
    CHECK(r.sigma_threshold == doctest::Approx(cell.threshold).epsilon(1e-6));
    CHECK(std::abs(r.ce_sum_endogenous - r.ce_sum_exogenous - r.difference_direct) < 1e-15);
  }
}

TEST_CASE("oracle welfare recomputed live") {
  const ModelParams p = ModelParams::figure1_base(10.0);
  const auto w = oracle::welfare(p, 100000);
  CHECK(std::abs(w.difference - frozen::kWelfare[1].difference) < 1e-9);
  CHECK(w.threshold == doctest::Approx(frozen::kWelfare[1].threshold).epsilon(1e-6));
}

TEST_CASE("aggregate welfare") {
  const ModelParams p = ModelParams::figure1_base(1.0);
  const auto en = solve_endogenous(p);
  using Fn = EndogenousCoefficients::Fn;
  CHECK(aggregate_welfare(en) ==
        doctest::Approx(p.Sigma * en.mu(0.0) + p.I * en.value(Fn::g1, 0.0)).epsilon(1e-14));
  CHECK(std::abs(aggregate_welfare(en) -
                 (-10.0 / 101.0 + 10.0 * frozen::kCore[0].en_g1_0)) < 1e-8);

  SUBCASE("no supply leaves the noise term") {
    const ModelParams q = with_supply(p, 0.0);
    const auto ex = solve_exogenous(q);
    const auto fine = oracle::rk4_core(q, oracle::Model::kExogenous, 100000);
    const double g1 = q.noise_var() * oracle::g33_integral(fine);
    CHECK(aggregate_welfare(ex) == doctest::Approx(q.I * ex.value(ExogenousCoefficients::Fn::g1, 0.0)));
    CHECK(std::abs(ex.value(ExogenousCoefficients::Fn::g1, 0.0) - g1) < 1e-9);
  }
  SUBCASE("noise holding the whole supply") {
    ModelParams q = p;
    q.Y0 = q.Sigma;
    q.with_equal_holdings();
    const auto e = solve_endogenous(q);
    const double expect = q.I * (e.value(Fn::g1, 0.0) + e.value(Fn::g2, 0.0) * q.Sigma +
                                 e.value(Fn::g22, 0.0) * q.Sigma * q.Sigma);
    CHECK(aggregate_welfare(e) == doctest::Approx(expect).epsilon(1e-14));
  }
  SUBCASE("initial dividend cancels in the difference") {
    ModelParams q = p;
    q.D0 = 3.0;
    const auto r0 = welfare_difference(p);
    const auto r1 = welfare_difference(q);
    CHECK(std::abs(r1.difference_direct - r0.difference_direct) < 1e-12);
    CHECK(r1.ce_sum_endogenous - r0.ce_sum_endogenous == doctest::Approx(3.0));
  }
}

TEST_CASE("noise-free difference is the first term") {
  const ModelParams p = degenerate();
  const auto r = welfare_difference(p);
  CHECK(r.difference_formula == r.first_term);
  CHECK(std::abs(r.difference_direct - r.first_term) < 1e-12);
  CHECK(r.sigma_threshold == 0.0);
  CHECK(sigma_threshold(p) == 0.0);
}

TEST_CASE("supply enters only through the first term") {
  const ModelParams p = ModelParams::figure1_base(10.0);
  const double at_zero = welfare_difference(with_supply(p, 0.0)).difference_formula;
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int k = 0; k < 5; ++k) {
    const double s = u(gen);
    const ModelParams q = with_supply(p, s);
    const double expect = std::pow(q.a, 3) * s * s * std::pow(q.sigma_D, 6) /
                          (2.0 * q.I * std::pow(q.risk_var() + 2.0 * q.kappa * q.I, 2));
    CHECK(std::abs(welfare_difference(q).difference_formula - at_zero - expect) < 1e-10);
  }
}

TEST_CASE("threshold brackets the sign change") {
  for (double a : {1.0, 10.0, 20.0}) {
    CAPTURE(a);
    const ModelParams p = ModelParams::figure1_base(a);
    const double star = sigma_threshold(p);
    CHECK(sigma_threshold(with_supply(p, 5.0)) == doctest::Approx(star).epsilon(1e-9));
    CHECK(welfare_difference(with_supply(p, 2.0 * star + 1.0)).difference_direct > 0.0);
    if (star > 0.0) {
      for (double f : {1.01, 2.0}) CHECK(welfare_difference(with_supply(p, f * star)).difference_direct > 0.0);
      for (double f : {0.99, 0.5}) CHECK(welfare_difference(with_supply(p, f * star)).difference_direct < 0.0);
    }
  }
}

TEST_CASE("closed form requires zero initial noise") {
  ModelParams p = ModelParams::figure1_base(1.0);
  p.Y0 = 0.5;
  p.with_equal_holdings();
  const auto r = welfare_difference(p);
  CHECK_FALSE(r.formula_available);
  CHECK(std::isnan(r.difference_formula));
  CHECK(std::isfinite(r.difference_direct));
  CHECK(code_of([&] { welfare_difference(p, {kDefaultTol, true}); }) ==
        ErrorCode::kHypothesisViolation);
  p.Y0 = 0.0;
  p.Yp0 = 1.0;
  p.with_equal_holdings();
  CHECK(code_of([&] { welfare_difference(p, {kDefaultTol, true}); }) ==
        ErrorCode::kHypothesisViolation);
}

TEST_CASE("axes") {
  for (Axis axis : {Axis::kSigmaYp, Axis::kSigmaD, Axis::kKappa, Axis::kI}) {
    CHECK(parse_axis(axis_name(axis)) == axis);
    CHECK_FALSE(default_axis_values(axis).empty());
  }
  CHECK_FALSE(parse_axis("gamma").has_value());
  const ModelParams base = ModelParams::figure1_base(1.0);
  const ModelParams q = with_axis_value(base, Axis::kI, 4.0, 10.0);
  CHECK(q.I == 4);
  CHECK(q.a == 10.0);
  CHECK(q.theta0.size() == 4);
  CHECK(q.violations().empty());
  CHECK(code_of([&] { with_axis_value(base, Axis::kI, 2.5, 1.0); }) == ErrorCode::kConfigInvalid);
}

TEST_CASE("singleton sweep reproduces the direct call") {
  const ModelParams base = ModelParams::figure1_base(1.0);
  const auto table = sweep(base, Axis::kSigmaYp, {10.0}, {1.0});
  REQUIRE(table.cells.size() == 1);
  REQUIRE(table.cells[0].report.has_value());
  const auto direct = welfare_difference(base);
  CHECK(table.cells[0].report->difference_direct == direct.difference_direct);
  CHECK(table.cells[0].report->difference_formula == direct.difference_formula);
  CHECK(table.cells[0].report->sigma_threshold == direct.sigma_threshold);
}

TEST_CASE("kappa sweep against the oracle") {
  const auto table = sweep(ModelParams::figure1_base(1.0), Axis::kKappa, {1.0, 5.0, 25.0, 125.0}, {1.0});
  REQUIRE(table.cells.size() == 4);
  const std::array<double, 4> expect = {frozen::kWelfare[3].difference, frozen::kWelfare[0].difference,
                                        frozen::kWelfare[4].difference, frozen::kWelfare[5].difference};
  for (std::size_t i = 0; i < 4; ++i) {
    REQUIRE(table.cells[i].report.has_value());
    CHECK(std::abs(table.cells[i].report->difference_formula - expect[i]) < 1e-8);
  }
  CHECK(std::abs(table.cells[3].report->difference_formula) <
        std::abs(table.cells[0].report->difference_formula));
}

TEST_CASE("sweep ordering, failures and csv") {
  const ModelParams base = ModelParams::figure1_base(1.0);
  const auto table = sweep(base, Axis::kI, {2.0, 2.5, 5.0}, {10.0, 1.0});
  REQUIRE(table.cells.size() == 6);
  // a-major in the order given, then axis values in the order given.
  CHECK(table.cells[0].a == 10.0);
  CHECK(table.cells[0].axis_value == 2.0);
  CHECK(table.cells[5].a == 1.0);
  CHECK(table.cells[5].axis_value == 5.0);
  CHECK_FALSE(table.cells[1].report.has_value());
  CHECK_FALSE(table.cells[4].report.has_value());
  CHECK(table.cells[1].error_code == ErrorCode::kConfigInvalid);
  CHECK_FALSE(table.cells[1].error.empty());
  for (const auto& cell : table.cells) {
    if (!cell.report) continue;
    CHECK(std::abs(cell.report->difference_direct - cell.report->difference_formula) < 1e-8);
  }
  const std::string csv = format_sweep_csv(table);
  CHECK(csv.rfind(std::string(kSweepCsvHeader) + "\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
  CHECK(csv.find("I,2.5,10,,,,") != std::string::npos);
  CHECK(csv == format_sweep_csv(sweep(base, Axis::kI, {2.0, 2.5, 5.0}, {10.0, 1.0})));

  ModelParams shifted = base;
  shifted.Yp0 = 0.1;
  CHECK(code_of([&] { sweep(shifted, Axis::kI, {2.0}, {1.0}); }) == ErrorCode::kHypothesisViolation);
}
