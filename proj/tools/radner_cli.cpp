// radner-cli: solve, verify, simulate, welfare and sweep from the command
// line. Options may also come from a flat `key = value` config file given
// with --config; command-line flags override it.
//
// Exit codes: 0 success, 1 invalid configuration, 2 failed check.

#include <radner/radner.h>

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitCheckFailed = 2;

constexpr double kResidualThreshold = 1e-6;
constexpr double kTerminalThreshold = 1e-8;
constexpr double kWelfareAgreement = 1e-8;
constexpr double kZThreshold = 3.0;

struct RunConfig {
  std::string command;
  std::string model = "both";
  radner_params params{};
  std::vector<double> theta0;
  double tol = 1e-10;
  int grid = 1001;
  long long paths = 100000;
  long long steps = 1024;
  unsigned long long seed = 42;
  std::string out;
  std::vector<std::string> emit = {"csv", "report"};
  std::string axis = "sigma_Yp";
  std::vector<double> values;
  std::vector<double> a_values = {1.0, 10.0, 20.0};
  bool formula = false;
  long long dump_paths = 0;
  long long samples = 10000;

  bool emits(const std::string& what) const {
    return std::find(emit.begin(), emit.end(), what) != emit.end();
  }
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string join(const std::vector<double>& v, const char* sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += fmt(v[i]);
  }
  return out;
}

// Everything that influences the data, in a fixed order. The output
// directory is deliberately left out.
std::string config_line(const RunConfig& c) {
  const radner_params& p = c.params;
  std::ostringstream s;
  s << "# config: command=" << c.command << " model=" << c.model << " I=" << p.I
    << " a=" << fmt(p.a) << " sigma_D=" << fmt(p.sigma_D) << " sigma_Yp=" << fmt(p.sigma_Yp)
    << " kappa=" << fmt(p.kappa) << " Sigma=" << fmt(p.Sigma) << " Y0=" << fmt(p.Y0)
    << " Yp0=" << fmt(p.Yp0) << " D0=" << fmt(p.D0) << " theta0=["
    << (c.theta0.empty() ? std::string("equal") : join(c.theta0, ",")) << "]"
    << " tol=" << fmt(c.tol) << " grid=" << c.grid << " paths=" << c.paths
    << " steps=" << c.steps << " seed=" << c.seed;
  if (c.command == "sweep") {
    s << " axis=" << c.axis << " values=[" << join(c.values, ",") << "] a_values=["
      << join(c.a_values, ",") << "]";
  }
  if (c.command == "welfare") s << " formula=" << (c.formula ? "true" : "false");
  if (c.command == "verify") s << " samples=" << c.samples;
  if (c.command == "simulate") s << " dump_paths=" << c.dump_paths;
  s << "\n";
  return s.str();
}

// Writes to a temporary sibling and renames it into place.
void write_atomic(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  fs::rename(tmp, path);
}

struct Failure {
  int code;
  std::string message;
};

[[noreturn]] void check_failed(const std::string& what) { throw Failure{kExitCheckFailed, what}; }

void require_ok(radner_status st, const std::string& context) {
  if (st == RADNER_OK || st == RADNER_WARN_SATURATED) return;
  const int code = (st == RADNER_E_CONFIG_INVALID || st == RADNER_E_HYPOTHESIS_VIOLATION ||
                    st == RADNER_E_INVALID_ARGUMENT || st == RADNER_E_INVALID_MEASURE)
                       ? kExitInvalid
                       : kExitCheckFailed;
  throw Failure{code, context + ": " + radner_status_name(st) + ": " + radner_last_error()};
}

class Model {
 public:
  Model(const radner_params& p, radner_model_kind kind, double tol) {
    require_ok(radner_model_solve(&p, kind, tol, &m_),
               kind == RADNER_ENDOGENOUS ? "endogenous solve" : "exogenous solve");
  }
  ~Model() { radner_model_free(m_); }
  Model(const Model&) = delete;
  Model& operator=(const Model&) = delete;
  const radner_model* get() const { return m_; }

 private:
  radner_model* m_ = nullptr;
};

std::vector<radner_model_kind> kinds_of(const std::string& model) {
  if (model == "endogenous") return {RADNER_ENDOGENOUS};
  if (model == "exogenous") return {RADNER_EXOGENOUS};
  return {RADNER_ENDOGENOUS, RADNER_EXOGENOUS};
}

const char* kind_name(radner_model_kind k) {
  return k == RADNER_ENDOGENOUS ? "endogenous" : "exogenous";
}

// ---- solve ---------------------------------------------------------------

int run_solve(const RunConfig& c, const fs::path& out) {
  for (radner_model_kind kind : kinds_of(c.model)) {
    Model m(c.params, kind, c.tol);
    const std::size_t nf = radner_model_function_count(m.get());
    std::string csv = config_line(c) + "t";
    for (std::size_t i = 0; i < nf; ++i) csv += std::string(",") + radner_model_function_name(m.get(), i);
    csv += "\n";
    std::vector<double> row(nf);
    for (int k = 0; k < c.grid; ++k) {
      const double t = k == c.grid - 1 ? 1.0 : static_cast<double>(k) / (c.grid - 1);
      require_ok(radner_model_eval_all(m.get(), t, row.data()), "evaluate");
      csv += fmt(t);
      for (double v : row) csv += "," + fmt(v);
      csv += "\n";
    }
    const fs::path file = out / (std::string("coefficients_") + kind_name(kind) + ".csv");
    if (c.emits("csv")) write_atomic(file, csv);
    if (c.emits("report")) {
      double c1, c2;
      radner_model_bounds(m.get(), &c1, &c2);
      double b0, g0;
      radner_model_eval(m.get(), 1, 0.0, &b0);
      radner_model_eval(m.get(), 8, 0.0, &g0);
      std::printf("%s: beta(0) = %.17g, g33(0) = %.17g, C1 = %.17g, C2 = %.17g\n",
                  kind_name(kind), b0, g0, c1, c2);
    }
  }
  return kExitOk;
}

// ---- verify --------------------------------------------------------------

int run_verify(const RunConfig& c, const fs::path& out) {
  std::string csv = config_line(c) + "model,check,value,threshold,argmax_t,fd_value,pass\n";
  std::vector<std::string> failures;
  auto add = [&](const char* model, const std::string& check, double value, double threshold,
                 double argmax_t, double fd, bool pass) {
    csv += std::string(model) + "," + check + "," + fmt(value) + "," + fmt(threshold) + "," +
           (std::isnan(argmax_t) ? std::string() : fmt(argmax_t)) + "," +
           (std::isnan(fd) ? std::string() : fmt(fd)) + "," + (pass ? "true" : "false") + "\n";
    if (!pass) failures.push_back(std::string(model) + " " + check + " = " + fmt(value));
    if (c.emits("report")) {
      std::printf("%-10s %-22s %-24s %s\n", model, check.c_str(), fmt(value).c_str(),
                  pass ? "ok" : "FAIL");
    }
  };
  const double nan = std::nan("");

  for (radner_model_kind kind : kinds_of(c.model)) {
    Model m(c.params, kind, c.tol);
    const char* name = kind_name(kind);
    radner_report* rep = nullptr;
    require_ok(radner_verify_residuals(m.get(), static_cast<std::size_t>(c.grid), &rep),
               "residuals");
    for (std::size_t i = 0; i < radner_report_rows(rep); ++i) {
      const char* eq;
      double r, t, fd;
      radner_report_row(rep, i, &eq, &r, &t, &fd);
      add(name, std::string("ode_") + eq, r, kResidualThreshold, t, fd, r < kResidualThreshold);
    }
    double terminal, endpoint;
    radner_report_terminal(rep, &terminal, &endpoint);
    radner_report_free(rep);
    add(name, "terminal_conditions", terminal, kTerminalThreshold, nan, nan,
        terminal < kTerminalThreshold);

    double dev = 0.0;
    radner_status st = radner_check_clearing(m.get(), static_cast<std::size_t>(c.samples), c.seed, &dev);
    if (st == RADNER_E_CLEARING_VIOLATION) std::fprintf(stderr, "%s\n", radner_last_error());
    else require_ok(st, "clearing");
    add(name, "clearing", dev, 1e-12, nan, nan, st == RADNER_OK);

    radner_bound_report b{};
    st = radner_check_bounds(m.get(), 1001, &b);
    if (st == RADNER_E_BOUND_VIOLATION) std::fprintf(stderr, "%s\n", radner_last_error());
    else require_ok(st, "bounds");
    add(name, b.equality_mode ? "bounds_equality" : "bounds_strict",
        b.equality_mode ? b.max_equality_gap : std::min(b.min_z1_deficit, b.min_z2_deficit),
        b.equality_mode ? 1e-10 : 0.0, nan, nan, st == RADNER_OK);
    add(name, "taylor_ratio", b.taylor_ratio, 0.01, nan, nan,
        st == RADNER_OK && std::abs(b.taylor_ratio - 1.0) <= 0.01);

    if (kind == RADNER_ENDOGENOUS) {
      double inv = 0.0, tr = 0.0;
      st = radner_check_optimizers(m.get(), static_cast<std::size_t>(c.samples), c.seed, &inv, &tr);
      if (st == RADNER_E_IDENTITY_VIOLATION) std::fprintf(stderr, "%s\n", radner_last_error());
      else require_ok(st, "optimizer identities");
      add(name, "investor_maximizer", inv, 1e-6, nan, nan, st == RADNER_OK);
      add(name, "tracker_maximizer", tr, 1e-6, nan, nan, st == RADNER_OK);
    } else {
      double g1dev, mudev;
      require_ok(radner_check_decoupling(m.get(), static_cast<std::size_t>(c.grid), &g1dev, &mudev),
                 "decoupling");
      add(name, "decoupling_g1", g1dev, 1e-8, nan, nan, g1dev < 1e-8);
      add(name, "decoupling_mu", mudev, 1e-8, nan, nan, mudev < 1e-8);
    }
  }
  if (c.emits("csv")) write_atomic(out / "verification_report.csv", csv);
  if (!failures.empty()) {
    std::string msg = "verification failed:";
    for (const auto& f : failures) msg += "\n  " + f;
    check_failed(msg);
  }
  return kExitOk;
}

// ---- simulate ------------------------------------------------------------

int run_simulate(const RunConfig& c, const fs::path& out) {
  if (c.model == "exogenous") {
    throw Failure{kExitInvalid,
                  "simulate: InvalidMeasure: the Q-hat drift adjustment needs the endogenous model"};
  }
  Model m(c.params, RADNER_ENDOGENOUS, c.tol);
  radner_martingale_report r{};
  require_ok(radner_martingale_check(m.get(), static_cast<std::size_t>(c.steps),
                                     static_cast<std::size_t>(c.paths), c.seed, 1, &r),
             "martingale check");
  std::string csv = config_line(c) + "statistic,mean,std_error,target,z,n,pass\n";
  std::vector<std::string> failures;
  auto add = [&](const char* name, const radner_estimate& e) {
    const bool pass = std::abs(e.z) < kZThreshold;
    csv += std::string(name) + "," + fmt(e.mean) + "," + fmt(e.std_error) + "," + fmt(e.target) +
           "," + fmt(e.z) + "," + std::to_string(e.n) + "," + (pass ? "true" : "false") + "\n";
    if (!pass) failures.push_back(std::string(name) + " z = " + fmt(e.z));
    if (c.emits("report")) {
      std::printf("%-28s mean %-24s se %-12.4g target %-24s z %+.3f\n", name, fmt(e.mean).c_str(),
                  e.std_error, fmt(e.target).c_str(), e.z);
    }
  };
  add("value_martingale_P", r.value_p);
  add("wealth_martingale_Qhat", r.wealth_q);
  add("dhat_drift_Qhat", r.d_hat_q);
  if (c.emits("csv")) write_atomic(out / "simulation_report.csv", csv);

  if (c.dump_paths > 0) {
    struct Dump {
      std::string text;
      long long left;
    } dump{config_line(c) + "path_id,t,D,Yp,Y,S,theta_inv,theta_tracker,X_inv,V_inv\n",
           c.dump_paths};
    auto cb = [](const radner_path_view* p, void* user) -> int {
      auto* d = static_cast<Dump*>(user);
      char line[512];
      for (std::size_t i = 0; i < p->nodes; ++i) {
        std::snprintf(line, sizeof line,
                      "%llu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      static_cast<unsigned long long>(p->path_id), p->t[i], p->D[i], p->Yp[i],
                      p->Y[i], p->S[i], p->theta_inv[i], p->theta_tracker[i], p->X_inv[i],
                      p->V_inv[i]);
        d->text += line;
      }
      return --d->left <= 0 ? 1 : 0;
    };
    require_ok(radner_sample_paths(m.get(), static_cast<std::size_t>(c.steps),
                                   static_cast<std::size_t>(c.dump_paths), c.seed,
                                   RADNER_MEASURE_P, cb, &dump),
               "path dump");
    write_atomic(out / "paths.csv", dump.text);
  }
  if (!failures.empty()) {
    std::string msg = "martingale check failed (|z| >= 3):";
    for (const auto& f : failures) msg += "\n  " + f;
    check_failed(msg);
  }
  return kExitOk;
}

// ---- welfare -------------------------------------------------------------

int run_welfare(const RunConfig& c, const fs::path& out) {
  radner_welfare_report r{};
  const radner_status st = radner_welfare_difference(&c.params, c.tol, c.formula ? 1 : 0, &r);
  if (st == RADNER_E_HYPOTHESIS_VIOLATION) {
    throw Failure{kExitInvalid, radner_last_error()};
  }
  require_ok(st, "welfare");
  std::string csv = config_line(c) +
                    "ce_sum_endogenous,ce_sum_exogenous,diff_direct,diff_formula,first_term,"
                    "g33_gap_integral,sigma_threshold\n";
  csv += fmt(r.ce_sum_endogenous) + "," + fmt(r.ce_sum_exogenous) + "," +
         fmt(r.difference_direct) + "," +
         (r.formula_available ? fmt(r.difference_formula) : std::string()) + "," +
         fmt(r.first_term) + "," + fmt(r.g33_integral_gap) + "," + fmt(r.sigma_threshold) + "\n";
  if (c.emits("csv")) write_atomic(out / "welfare_report.csv", csv);
  if (c.emits("report")) {
    std::printf("aggregate CE endogenous  %s\n", fmt(r.ce_sum_endogenous).c_str());
    std::printf("aggregate CE exogenous   %s\n", fmt(r.ce_sum_exogenous).c_str());
    std::printf("difference (direct)      %s\n", fmt(r.difference_direct).c_str());
    if (r.formula_available) {
      std::printf("difference (formula)     %s\n", fmt(r.difference_formula).c_str());
    }
    std::printf("int (g33_en - g33_ex)    %s\n", fmt(r.g33_integral_gap).c_str());
    std::printf("Sigma threshold          %s\n", fmt(r.sigma_threshold).c_str());
  }
  if (r.formula_available &&
      !(std::abs(r.difference_direct - r.difference_formula) < kWelfareAgreement)) {
    check_failed("welfare difference: direct and closed-form values disagree by " +
                 fmt(std::abs(r.difference_direct - r.difference_formula)));
  }
  return kExitOk;
}

// ---- sweep ---------------------------------------------------------------

struct SeriesPoint {
  double x, y;
};

// Line chart per a value, built only from the CSV rows.
std::string sweep_svg(const std::string& csv, const std::string& axis) {
  std::map<double, std::vector<SeriesPoint>> series;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("axis,", 0) == 0) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    if (f.size() < 4 || f[3].empty()) continue;
    series[std::stod(f[2])].push_back({std::stod(f[1]), std::stod(f[3])});
  }
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& [a, pts] : series) {
    for (const auto& p : pts) {
      x0 = std::min(x0, p.x);
      x1 = std::max(x1, p.x);
      y0 = std::min(y0, p.y);
      y1 = std::max(y1, p.y);
    }
  }
  if (series.empty()) x0 = y0 = 0.0, x1 = y1 = 1.0;
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 == y0) y1 = y0 + 1.0;
  const double W = 640, H = 400, L = 70, R = 120, T = 30, B = 50;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
  const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"};
  const char* dashes[] = {"", "8,4", "8,3,2,3", "2,3", "12,4", "4,4"};
  char buf[256];
  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf,
                "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" stroke=\"black\"/>\n",
                L, T, W - L - R, H - T - B);
  svg += buf;
  if (y0 < 0.0 && y1 > 0.0) {
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%g\" y1=\"%.2f\" x2=\"%g\" y2=\"%.2f\" stroke=\"#999\"/>\n", L,
                  py(0.0), W - R, py(0.0));
    svg += buf;
  }
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4.0, yv = y0 + (y1 - y0) * k / 4.0;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.2f\" y=\"%g\" font-size=\"11\" text-anchor=\"middle\">%.4g</text>\n",
                  px(xv), H - B + 16, xv);
    svg += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%g\" y=\"%.2f\" font-size=\"11\" text-anchor=\"end\">%.3g</text>\n",
                  L - 6, py(yv) + 4, yv);
    svg += buf;
  }
  std::snprintf(buf, sizeof buf,
                "<text x=\"%g\" y=\"%g\" font-size=\"13\" text-anchor=\"middle\">%s</text>\n",
                L + (W - L - R) / 2, H - 12, axis.c_str());
  svg += buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"%g\" y=\"%g\" font-size=\"13\">welfare difference</text>\n", L, T - 10);
  svg += buf;
  std::size_t idx = 0;
  for (const auto& [a, pts] : series) {
    const char* color = colors[idx % 6];
    std::string points;
    for (const auto& p : pts) {
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(p.x), py(p.y));
      points += buf;
    }
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\"";
    if (*dashes[idx % 6]) svg += " stroke-dasharray=\"" + std::string(dashes[idx % 6]) + "\"";
    svg += " points=\"" + points + "\"/>\n";
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%g\" y=\"%g\" font-size=\"12\" fill=\"%s\">a = %g</text>\n",
                  W - R + 10, T + 16 + 18.0 * static_cast<double>(idx), color, a);
    svg += buf;
    ++idx;
  }
  svg += "</svg>\n";
  return svg;
}

int run_sweep(const RunConfig& c, const fs::path& out) {
  radner_sweep* sw = nullptr;
  require_ok(radner_sweep_run(&c.params, c.axis.c_str(), c.values.data(), c.values.size(),
                              c.a_values.data(), c.a_values.size(), c.tol, &sw),
             "sweep");
  std::vector<std::string> failures;
  for (std::size_t i = 0; i < radner_sweep_cells(sw); ++i) {
    double v, a;
    radner_welfare_report r;
    const char* err = nullptr;
    if (radner_sweep_cell(sw, i, &v, &a, &r, &err) != RADNER_OK) {
      std::fprintf(stderr, "cell %s=%s a=%s failed: %s\n", c.axis.c_str(), fmt(v).c_str(),
                   fmt(a).c_str(), err ? err : "?");
      continue;
    }
    if (!(std::abs(r.difference_direct - r.difference_formula) < kWelfareAgreement)) {
      failures.push_back(c.axis + "=" + fmt(v) + " a=" + fmt(a));
    }
  }
  std::string csv(radner_sweep_csv(sw, nullptr, 0), '\0');
  radner_sweep_csv(sw, csv.data(), csv.size() + 1);
  radner_sweep_free(sw);
  const std::string body = config_line(c) + csv;
  if (c.emits("csv")) write_atomic(out / ("sweep_" + c.axis + ".csv"), body);
  if (c.emits("svg")) write_atomic(out / ("sweep_" + c.axis + ".svg"), sweep_svg(body, c.axis));
  if (c.emits("report")) std::fputs(csv.c_str(), stdout);
  if (!failures.empty()) {
    std::string msg = "welfare consistency failed (|direct - formula| >= 1e-8) at:";
    for (const auto& f : failures) msg += "\n  " + f;
    check_failed(msg);
  }
  return kExitOk;
}

// ---- configuration -------------------------------------------------------

std::vector<std::string> config_violations(RunConfig& c) {
  std::vector<std::string> v;
  if (!c.theta0.empty()) {
    c.params.theta0 = c.theta0.data();
    c.params.theta0_len = c.theta0.size();
  }
  if (radner_params_validate(&c.params) == RADNER_E_CONFIG_INVALID) {
    std::string msg = radner_last_error();
    const std::string prefix = "ConfigInvalid: ";
    if (msg.rfind(prefix, 0) == 0) msg.erase(0, prefix.size());
    std::stringstream s(msg);
    for (std::string item; std::getline(s, item, ';');) {
      item.erase(0, item.find_first_not_of(' '));
      v.push_back(item);
    }
  }
  if (!(c.tol > 0.0 && c.tol < 1.0)) v.push_back("tol must lie in (0, 1)");
  if (c.grid < 11) v.push_back("grid must be >= 11");
  if (c.paths < 1) v.push_back("paths must be >= 1");
  if (c.steps < 1) v.push_back("steps must be >= 1");
  if (c.samples < 1) v.push_back("samples must be >= 1");
  if (c.dump_paths < 0) v.push_back("dump-paths must be >= 0");
  for (const auto& e : c.emit) {
    if (e != "csv" && e != "svg" && e != "report") {
      v.push_back("emit entries must be csv, svg or report (got '" + e + "')");
    }
  }
  if (c.command == "sweep") {
    std::size_t count = 0;
    if (radner_default_axis_values(c.axis.c_str(), nullptr, 0, &count) != RADNER_OK) {
      v.push_back("axis must be one of sigma_Yp, sigma_D, kappa, I (got '" + c.axis + "')");
    } else if (c.values.empty()) {
      c.values.resize(count);
      radner_default_axis_values(c.axis.c_str(), c.values.data(), count, &count);
    }
    if (c.a_values.empty()) v.push_back("a-values must not be empty");
    for (double a : c.a_values) {
      if (!(a > 0.0 && std::isfinite(a))) v.push_back("a-values must be positive (got " + fmt(a) + ")");
    }
    if (c.params.Y0 != 0.0 || c.params.Yp0 != 0.0) v.push_back("sweep requires Y0 = Yp0 = 0");
  }
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig c;
  radner_params_init(&c.params);

  CLI::App app{"Radner equilibria with an endogenous noise tracker or an exogenous noise trader"};
  app.set_config("--config", "", "flat key = value file; command-line flags override it");
  app.require_subcommand(1, 1);
  app.fallthrough();

  app.add_option("--model", c.model, "endogenous, exogenous or both")
      ->check(CLI::IsMember({"endogenous", "exogenous", "both"}))
      ->capture_default_str();
  app.add_option("--tol", c.tol, "integrator tolerance")->capture_default_str();
  app.add_option("--grid", c.grid, "grid points for tables and residual checks")
      ->capture_default_str();
  app.add_option("--paths", c.paths, "Monte Carlo paths")->capture_default_str();
  app.add_option("--steps", c.steps, "time steps per path")->capture_default_str();
  app.add_option("--seed", c.seed, "random seed")->capture_default_str();
  app.add_option("--samples", c.samples, "random states for identity checks")
      ->capture_default_str();
  app.add_option("--out", c.out, "output directory (default $RADNER_OUTPUT_DIR or .)");
  app.add_option("--emit", c.emit, "any of csv, svg, report")->delimiter(',')->capture_default_str();
  app.add_option("--axis", c.axis, "sweep axis: sigma_Yp, sigma_D, kappa or I")
      ->capture_default_str();
  app.add_option("--values", c.values, "sweep axis values (default grid per axis)")
      ->delimiter(',');
  app.add_option("--a-values,--a_values", c.a_values, "risk aversions for the sweep")
      ->delimiter(',')
      ->capture_default_str();
  app.add_flag("--formula", c.formula, "require the closed-form welfare difference");
  app.add_option("--dump-paths,--dump_paths", c.dump_paths, "write the first N paths to paths.csv");

  app.add_option("--I", c.params.I, "number of investors")->capture_default_str();
  app.add_option("--a", c.params.a, "risk aversion")->capture_default_str();
  app.add_option("--sigma_D", c.params.sigma_D, "dividend volatility")->capture_default_str();
  app.add_option("--sigma_Yp", c.params.sigma_Yp, "volatility of Y'")->capture_default_str();
  app.add_option("--kappa", c.params.kappa, "tracking penalty")->capture_default_str();
  app.add_option("--Sigma", c.params.Sigma, "stock supply")->capture_default_str();
  app.add_option("--Y0", c.params.Y0, "initial target")->capture_default_str();
  app.add_option("--Yp0", c.params.Yp0, "initial Y'")->capture_default_str();
  app.add_option("--D0", c.params.D0, "initial dividend")->capture_default_str();
  app.add_option("--theta0", c.theta0, "initial investor holdings (default equal split)")
      ->delimiter(',');

  for (const char* cmd : {"solve", "verify", "simulate", "welfare", "sweep"}) {
    app.add_subcommand(cmd)->callback([&c, cmd] { c.command = cmd; });
  }
  app.get_subcommand("solve")->description("tabulate all coefficient functions");
  app.get_subcommand("verify")->description("ODE residuals, identities and bounds");
  app.get_subcommand("simulate")->description("Monte Carlo martingale checks");
  app.get_subcommand("welfare")->description("aggregate welfare and its difference");
  app.get_subcommand("sweep")->description("welfare difference over a parameter grid");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }
  for (auto* sub : app.get_subcommands()) c.command = sub->get_name();

  const auto violations = config_violations(c);
  if (!violations.empty()) {
    std::fprintf(stderr, "ConfigInvalid:\n");
    for (const auto& v : violations) std::fprintf(stderr, "  %s\n", v.c_str());
    return kExitInvalid;
  }

  fs::path out = c.out;
  if (out.empty()) {
    const char* env = std::getenv("RADNER_OUTPUT_DIR");
    out = env && *env ? fs::path(env) : fs::path(".");
  }

  try {
    if (c.command == "solve") return run_solve(c, out);
    if (c.command == "verify") return run_verify(c, out);
    if (c.command == "simulate") return run_simulate(c, out);
    if (c.command == "welfare") return run_welfare(c, out);
    return run_sweep(c, out);
  } catch (const Failure& f) {
    std::fprintf(stderr, "%s\n", f.message.c_str());
    return f.code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitCheckFailed;
  }
}
