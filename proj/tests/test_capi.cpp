// Exercises the shared library through its C header only.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "radner/radner.h"

namespace {

struct Model {
  radner_model* ptr = nullptr;
  explicit Model(const radner_params& p, radner_model_kind kind, double tol = 1e-10) {
    REQUIRE(radner_model_solve(&p, kind, tol, &ptr) == RADNER_OK);
  }
  ~Model() { radner_model_free(ptr); }
  Model(const Model&) = delete;
  Model& operator=(const Model&) = delete;
};

radner_params base(double a = 1.0) {
  radner_params p;
  radner_params_init(&p);
  p.a = a;
  return p;
}

double shifted_by_eps(double t, double Y, double Yp, void* user);

struct Shift {
  const radner_model* model;
  double eps;
};

double tracker_rule(double t, double Y, double Yp, void* user) {
  double h = 0.0;
  radner_tracker_strategy(static_cast<const radner_model*>(user), t, Y, Yp, &h);
  return h;
}

double shifted_by_eps(double t, double Y, double Yp, void* user) {
  const auto* s = static_cast<const Shift*>(user);
  double h = 0.0;
  radner_tracker_strategy(s->model, t, Y, Yp, &h);
  return h + s->eps;
}

}  // namespace

TEST_CASE("defaults and validation") {
  CHECK(std::string(radner_version()).size() > 0);
  radner_params p = base();
  CHECK(p.I == 10);
  CHECK(p.sigma_Yp == 10.0);
  CHECK(p.theta0 == nullptr);
  CHECK(radner_params_validate(&p) == RADNER_OK);
  p.a = -1.0;
  p.kappa = 0.0;
  CHECK(radner_params_validate(&p) == RADNER_E_CONFIG_INVALID);
  const std::string msg = radner_last_error();
  CHECK(msg.find("a must be") != std::string::npos);
  CHECK(msg.find("kappa must be") != std::string::npos);
  CHECK(std::string(radner_status_name(RADNER_E_CONFIG_INVALID)) == "ConfigInvalid");

  radner_params q = base();
  const double holdings[2] = {0.5, 0.5};
  q.theta0 = holdings;
  q.theta0_len = 2;
  CHECK(radner_params_validate(&q) == RADNER_E_CONFIG_INVALID);
  CHECK(radner_params_validate(nullptr) == RADNER_E_INVALID_ARGUMENT);
}

TEST_CASE("solve and evaluate") {
  const radner_params p = base();
  Model en(p, RADNER_ENDOGENOUS);
  Model ex(p, RADNER_EXOGENOUS);
  CHECK(radner_model_kind_of(en.ptr) == RADNER_ENDOGENOUS);
  CHECK(radner_model_function_count(en.ptr) == 15);
  CHECK(radner_model_function_count(ex.ptr) == 9);
  CHECK(std::string(radner_model_function_name(en.ptr, 1)) == "beta");
  CHECK(radner_model_function_name(en.ptr, 99) == nullptr);

  double mu = 0.0;
  REQUIRE(radner_model_eval(en.ptr, 2, 0.0, &mu) == RADNER_OK);
  CHECK(mu == doctest::Approx(-10.0 / 101.0).epsilon(1e-14));
  std::vector<double> all(15);
  REQUIRE(radner_model_eval_all(en.ptr, 1.0, all.data()) == RADNER_OK);
  for (double v : all) CHECK(v == 0.0);
  double rate = 1.0;
  CHECK(radner_model_eval_rate(en.ptr, 1, 1.0, &rate) == RADNER_OK);
  CHECK(std::abs(rate) < 1e-8);

  double z1 = 0.0, z2 = 0.0, c1 = 0.0, c2 = 0.0;
  REQUIRE(radner_model_core(en.ptr, 1.0, &z1, &z2) == RADNER_OK);
  REQUIRE(radner_model_bounds(en.ptr, &c1, &c2) == RADNER_OK);
  CHECK(std::abs(z1 - 0.047023081511540485) < 1e-9);
  CHECK(z1 < c1);
  CHECK(z2 < c2);

  double v = 0.0;
  CHECK(radner_model_eval(en.ptr, 0, 1.5, &v) == RADNER_E_OUT_OF_DOMAIN);
  CHECK(std::string(radner_last_error()).find("outside") != std::string::npos);
  CHECK(radner_model_eval(en.ptr, 40, 0.5, &v) == RADNER_E_INVALID_ARGUMENT);
  CHECK(radner_model_eval(nullptr, 0, 0.5, &v) == RADNER_E_INVALID_ARGUMENT);

  radner_params bad = base();
  bad.sigma_D = -1.0;
  radner_model* none = nullptr;
  CHECK(radner_model_solve(&bad, RADNER_ENDOGENOUS, 1e-10, &none) == RADNER_E_CONFIG_INVALID);
  CHECK(none == nullptr);
}

TEST_CASE("prices, strategies and values") {
  const radner_params p = base();
  Model en(p, RADNER_ENDOGENOUS);
  Model ex(p, RADNER_EXOGENOUS);
  double s = 0.0, inv = 0.0, tr = 0.0, v = 0.0;
  REQUIRE(radner_stock_price(en.ptr, 1.0, 2.5, 1.0, 1.0, &s) == RADNER_OK);
  CHECK(s == 2.5);
  REQUIRE(radner_investor_strategy(en.ptr, 0.0, 0.0, 0.0, &inv) == RADNER_OK);
  REQUIRE(radner_tracker_strategy(en.ptr, 0.0, 0.0, 0.0, &tr) == RADNER_OK);
  CHECK(10.0 * inv + tr == doctest::Approx(1.0).epsilon(1e-15));
  REQUIRE(radner_investor_strategy(ex.ptr, 0.3, 0.0, 5.0, &inv) == RADNER_OK);
  CHECK(inv == doctest::Approx(0.1).epsilon(1e-15));
  REQUIRE(radner_tracker_strategy(ex.ptr, 0.3, 0.7, 5.0, &tr) == RADNER_OK);
  CHECK(tr == 0.7);
  REQUIRE(radner_investor_value(en.ptr, 1.0, 2.0, 0.0, 0.0, &v) == RADNER_OK);
  CHECK(v == doctest::Approx(-std::exp(-2.0)));
  CHECK(radner_investor_value(en.ptr, 0.0, -1000.0, 0.0, 0.0, &v) == RADNER_WARN_SATURATED);
  CHECK(std::isfinite(v));
  REQUIRE(radner_tracker_value(en.ptr, 1.0, 3.0, 1.0, 1.0, &v) == RADNER_OK);
  CHECK(v == 3.0);
  CHECK(radner_tracker_value(ex.ptr, 1.0, 3.0, 1.0, 1.0, &v) == RADNER_E_INVALID_ARGUMENT);
}

TEST_CASE("verification surface") {
  const radner_params p = base();
  Model en(p, RADNER_ENDOGENOUS);
  Model ex(p, RADNER_EXOGENOUS);
  radner_report* report = nullptr;
  REQUIRE(radner_verify_residuals(en.ptr, 1001, &report) == RADNER_OK);
  REQUIRE(radner_report_rows(report) == 15);
  for (size_t i = 0; i < 15; ++i) {
    const char* name = nullptr;
    double res = 0.0, at = 0.0, fd = 0.0;
    REQUIRE(radner_report_row(report, i, &name, &res, &at, &fd) == RADNER_OK);
    CHECK(std::strlen(name) > 0);
    CHECK(res < 1e-6);
  }
  double term = 1.0, endp = 1.0;
  REQUIRE(radner_report_terminal(report, &term, &endp) == RADNER_OK);
  CHECK(term < 1e-8);
  CHECK(endp < 1e-8);
  radner_report_free(report);

  double di = 1.0, dt = 1.0, dc = 1.0;
  CHECK(radner_check_optimizers(en.ptr, 2000, 42, &di, &dt) == RADNER_OK);
  CHECK(di < 1e-6);
  CHECK(radner_check_optimizers(ex.ptr, 10, 42, &di, &dt) == RADNER_E_INVALID_ARGUMENT);
  CHECK(radner_check_clearing(en.ptr, 2000, 42, &dc) == RADNER_OK);
  CHECK(dc < 1e-12);
  CHECK(radner_check_clearing(ex.ptr, 2000, 42, &dc) == RADNER_OK);

  radner_bound_report b;
  REQUIRE(radner_check_bounds(ex.ptr, 1001, &b) == RADNER_OK);
  CHECK(b.equality_mode == 0);
  CHECK(b.min_z1_deficit > 0.0);
  CHECK(std::abs(b.taylor_ratio - 1.0) < 0.01);
  double g1dev = 1.0, mudev = 1.0;
  REQUIRE(radner_check_decoupling(ex.ptr, 1001, &g1dev, &mudev) == RADNER_OK);
  CHECK(g1dev < 1e-8);
  CHECK(radner_check_decoupling(en.ptr, 1001, &g1dev, &mudev) == RADNER_E_INVALID_ARGUMENT);
}

TEST_CASE("simulation surface") {
  const radner_params p = base();
  Model en(p, RADNER_ENDOGENOUS);
  Model ex(p, RADNER_EXOGENOUS);
  struct Seen {
    size_t paths = 0;
    bool pinned = true;
  } seen;
  auto cb = [](const radner_path_view* v, void* user) -> int {
    auto* s = static_cast<Seen*>(user);
    ++s->paths;
    s->pinned = s->pinned && v->S[v->nodes - 1] == v->D[v->nodes - 1] && v->nodes == 33;
    return s->paths == 5 ? 1 : 0;
  };
  CHECK(radner_sample_paths(en.ptr, 32, 100, 7, RADNER_MEASURE_P, cb, &seen) == RADNER_OK);
  CHECK(seen.paths == 5);
  CHECK(seen.pinned);
  CHECK(radner_sample_paths(ex.ptr, 32, 10, 7, RADNER_MEASURE_QHAT, cb, &seen) ==
        RADNER_E_INVALID_MEASURE);

  radner_martingale_report m;
  REQUIRE(radner_martingale_check(en.ptr, 64, 4000, 42, 1, &m) == RADNER_OK);
  CHECK(m.value_p.n == 4000);
  CHECK(std::abs(m.value_p.z) < 4.0);
  CHECK(m.value_p.z == doctest::Approx((m.value_p.mean - m.value_p.target) / m.value_p.std_error));

  radner_estimate e1, e2, diff, single;
  Shift shift{en.ptr, 0.1};
  REQUIRE(radner_compare_tracker_objectives(en.ptr, 64, 4000, 5, tracker_rule, en.ptr,
                                            shifted_by_eps, &shift, &e1, &e2, &diff) == RADNER_OK);
  CHECK(diff.mean > 0.0);
  REQUIRE(radner_tracker_objective(en.ptr, 64, 4000, 5, tracker_rule, en.ptr, &single) == RADNER_OK);
  CHECK(single.mean == e1.mean);
  auto nan_rule = [](double, double, double, void*) { return std::nan(""); };
  CHECK(radner_tracker_objective(en.ptr, 8, 10, 5, nan_rule, nullptr, &single) ==
        RADNER_E_INVALID_ARGUMENT);
}

TEST_CASE("welfare surface") {
  radner_params p = base();
  radner_welfare_report r;
  REQUIRE(radner_welfare_difference(&p, 1e-10, 1, &r) == RADNER_OK);
  CHECK(r.formula_available == 1);
  CHECK(r.first_term == doctest::Approx(1.0 / 204020.0).epsilon(1e-15));
  CHECK(std::abs(r.difference_direct - r.difference_formula) < 1e-8);
  double star = 0.0;
  REQUIRE(radner_sigma_threshold(&p, 1e-10, &star) == RADNER_OK);
  CHECK(star == doctest::Approx(r.sigma_threshold));

  Model en(p, RADNER_ENDOGENOUS);
  double w = 0.0;
  REQUIRE(radner_aggregate_welfare(en.ptr, &w) == RADNER_OK);
  CHECK(w == doctest::Approx(r.ce_sum_endogenous).epsilon(1e-14));

  p.Y0 = 0.5;
  CHECK(radner_welfare_difference(&p, 1e-10, 1, &r) == RADNER_E_HYPOTHESIS_VIOLATION);
  REQUIRE(radner_welfare_difference(&p, 1e-10, 0, &r) == RADNER_OK);
  CHECK(r.formula_available == 0);
  CHECK(std::isnan(r.difference_formula));
}

TEST_CASE("sweep surface") {
  size_t count = 0;
  REQUIRE(radner_default_axis_values("kappa", nullptr, 0, &count) == RADNER_OK);
  CHECK(count > 0);
  std::vector<double> defaults(count);
  REQUIRE(radner_default_axis_values("kappa", defaults.data(), count, &count) == RADNER_OK);
  CHECK(radner_default_axis_values("nope", nullptr, 0, &count) == RADNER_E_INVALID_ARGUMENT);

  const radner_params p = base();
  const double values[] = {1.0, 1.5, 3.0};
  const double as[] = {1.0};
  radner_sweep* sweep = nullptr;
  REQUIRE(radner_sweep_run(&p, "I", values, 3, as, 1, 1e-10, &sweep) == RADNER_OK);
  REQUIRE(radner_sweep_cells(sweep) == 3);
  double x = 0.0, a = 0.0;
  radner_welfare_report r;
  const char* err = nullptr;
  CHECK(radner_sweep_cell(sweep, 0, &x, &a, &r, &err) == RADNER_OK);
  CHECK(err == nullptr);
  CHECK(x == 1.0);
  CHECK(radner_sweep_cell(sweep, 1, &x, &a, &r, &err) == RADNER_E_CONFIG_INVALID);
  CHECK(err != nullptr);
  const size_t len = radner_sweep_csv(sweep, nullptr, 0);
  std::vector<char> buf(len + 1);
  CHECK(radner_sweep_csv(sweep, buf.data(), buf.size()) == len);
  CHECK(std::string(buf.data()).rfind("axis,axis_value,a,diff_direct", 0) == 0);
  std::vector<char> small(10);
  CHECK(radner_sweep_csv(sweep, small.data(), small.size()) == len);
  CHECK(std::strlen(small.data()) == 9);
  radner_sweep_free(sweep);
  CHECK(radner_sweep_run(&p, "I", values, 0, as, 1, 1e-10, &sweep) == RADNER_E_INVALID_ARGUMENT);
}
