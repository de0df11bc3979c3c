#include "simulation.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "error.hpp"
#include "parallel.hpp"
#include "philox.hpp"

namespace radner::sim {
namespace {

template <class C>
std::vector<EquilibriumTable::Node> tabulate(const C& c, std::size_t n_steps) {
  using F = typename C::Fn;
  if (n_steps == 0) throw Error(ErrorCode::kInvalidArgument, "n_steps must be >= 1");
  const SimGrid grid{n_steps};
  std::vector<EquilibriumTable::Node> nodes(grid.nodes());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double t = grid.time(i);
    auto& n = nodes[i];
    n.t = t;
    n.alpha = c.value(F::alpha, t);
    n.beta = c.value(F::beta, t);
    n.mu = c.value(F::mu, t);
    n.g1 = c.value(F::g1, t);
    n.g2 = c.value(F::g2, t);
    n.g3 = c.value(F::g3, t);
    n.g22 = c.value(F::g22, t);
    n.g23 = c.value(F::g23, t);
    n.g33 = c.value(F::g33, t);
  }
  return nodes;
}

std::uint32_t stream_of(Measure m) { return m == Measure::kP ? 0u : 1u; }

double initial_investor_holding(const ModelParams& p) {
  return p.theta0.empty() ? (p.Sigma - p.Y0) / p.I : p.theta0.front();
}

struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t n = 0;

  void add(double x) {
    sum += x;
    sum_sq += x * x;
    ++n;
  }
  void merge(const Moments& o) {
    sum += o.sum;
    sum_sq += o.sum_sq;
    n += o.n;
  }
  double mean() const { return n ? sum / static_cast<double>(n) : 0.0; }
  double std_error() const {
    if (n < 2) return 0.0;
    const double dn = static_cast<double>(n);
    const double var = std::max(0.0, (sum_sq - sum * sum / dn) / (dn - 1.0));
    return std::sqrt(var / dn);
  }
};

// Splits [0, n_paths) into fixed blocks, runs body(block_first, block_last,
// slot) in parallel and returns the per-block slots in block order.
template <class Slot, class Body>
std::vector<Slot> run_blocks(std::size_t n_paths, Body body) {
  const std::size_t n_blocks = (n_paths + kBlockSize - 1) / kBlockSize;
  std::vector<Slot> slots(n_blocks);
  parallel_for(n_blocks, [&](std::size_t b) {
    const std::size_t first = b * kBlockSize;
    const std::size_t last = std::min(n_paths, first + kBlockSize);
    body(first, last, slots[b]);
  });
  return slots;
}

void require_paths(std::size_t n_paths) {
  if (n_paths == 0) throw Error(ErrorCode::kInvalidArgument, "n_paths must be >= 1");
}

}  // namespace

EquilibriumTable::EquilibriumTable(const EndogenousCoefficients& c, std::size_t n_steps)
    : kind_(ModelKind::kEndogenous), params_(c.params()), nodes_(tabulate(c, n_steps)) {
  for (auto& n : nodes_) {
    n.inv0 = investor_strategy(c, n.t, 0.0, 0.0);
    n.invY = investor_strategy(c, n.t, 1.0, 0.0) - n.inv0;
    n.invYp = investor_strategy(c, n.t, 0.0, 1.0) - n.inv0;
    n.tr0 = tracker_strategy(c, n.t, 0.0, 0.0);
    n.trY = tracker_strategy(c, n.t, 1.0, 0.0) - n.tr0;
    n.trYp = tracker_strategy(c, n.t, 0.0, 1.0) - n.tr0;
  }
}

EquilibriumTable::EquilibriumTable(const ExogenousCoefficients& c, std::size_t n_steps)
    : kind_(ModelKind::kExogenous), params_(c.params()), nodes_(tabulate(c, n_steps)) {
  const double I = params_.I;
  for (auto& n : nodes_) {
    n.inv0 = params_.Sigma / I;
    n.invY = -1.0 / I;
    n.invYp = 0.0;
    // The noise trader holds Y by fiat.
    n.tr0 = 0.0;
    n.trY = 1.0;
    n.trYp = 0.0;
  }
}

double EquilibriumTable::price(std::size_t i, double D, double Y, double Yp) const {
  const Node& n = nodes_[i];
  return D + n.mu + n.alpha * Y + n.beta * Yp;
}

double EquilibriumTable::theta_inv(std::size_t i, double Y, double Yp) const {
  const Node& n = nodes_[i];
  return n.inv0 + n.invY * Y + n.invYp * Yp;
}

double EquilibriumTable::theta_tracker(std::size_t i, double Y, double Yp) const {
  const Node& n = nodes_[i];
  return n.tr0 + n.trY * Y + n.trYp * Yp;
}

double EquilibriumTable::investor_ce(std::size_t i, double x, double Y, double Yp) const {
  const Node& n = nodes_[i];
  return x + n.g1 + n.g2 * Y + n.g3 * Yp + n.g22 * Y * Y + n.g23 * Y * Yp + n.g33 * Yp * Yp;
}

PathSampler::PathSampler(const EndogenousCoefficients& coeffs, SimGrid grid, Measure measure,
                         std::uint64_t seed, std::size_t substeps)
    : grid_(grid),
      measure_(measure),
      seed_(seed),
      substeps_(substeps),
      table_(coeffs, grid.n_steps * std::max<std::size_t>(substeps, 1)) {
  if (substeps == 0) throw Error(ErrorCode::kInvalidArgument, "substeps must be >= 1");
}

PathSampler::PathSampler(const ExogenousCoefficients& coeffs, SimGrid grid, Measure measure,
                         std::uint64_t seed, std::size_t substeps)
    : grid_(grid),
      measure_(measure),
      seed_(seed),
      substeps_(substeps),
      table_(coeffs, grid.n_steps * std::max<std::size_t>(substeps, 1)) {
  if (substeps == 0) throw Error(ErrorCode::kInvalidArgument, "substeps must be >= 1");
  if (measure == Measure::kQHat) {
    throw Error(ErrorCode::kInvalidMeasure,
                "the Q-hat drift adjustment needs endogenous coefficients");
  }
}

PathBundle PathSampler::sample(std::uint64_t path_id) const {
  PathBundle out;
  sample_into(path_id, out);
  return out;
}

void PathSampler::sample_into(std::uint64_t path_id, PathBundle& out) const {
  const ModelParams& p = params();
  const std::size_t n = grid_.n_steps, m = substeps_;
  const std::size_t nodes = grid_.nodes();
  out.grid = grid_;
  out.measure = measure_;
  out.path_id = path_id;
  for (auto* v : {&out.t, &out.D, &out.Yp, &out.Y, &out.S, &out.theta_inv, &out.theta_tracker,
                  &out.X_inv, &out.X_tracker, &out.V_inv, &out.D_hat}) {
    v->resize(nodes);
  }

  rng::NormalStream rng(seed_, stream_of(measure_), path_id);
  const double delta = 1.0 / static_cast<double>(n * m);
  const double sqrt_delta = std::sqrt(delta);
  const double delta_32 = delta * sqrt_delta;
  const double a = p.a, sd = p.sigma_D, sy = p.sigma_Yp;
  const double sd2 = sd * sd, sy2 = sy * sy;
  const double inv_2sqrt3 = 0.5 / std::numbers::sqrt3;
  const bool q_hat = measure_ == Measure::kQHat;

  double D = p.D0, Yp = p.Yp0, Y = p.Y0, D_hat = p.D0;
  auto record = [&](std::size_t i) {
    const std::size_t k = i * m;
    out.t[i] = grid_.time(i);
    out.D[i] = D;
    out.Yp[i] = Yp;
    out.Y[i] = Y;
    out.D_hat[i] = D_hat;
    out.S[i] = table_.price(k, D, Y, Yp);
    out.theta_inv[i] = table_.theta_inv(k, Y, Yp);
    out.theta_tracker[i] = table_.theta_tracker(k, Y, Yp);
    if (i == 0) {
      out.X_inv[0] = initial_investor_holding(p) * out.S[0];
      out.X_tracker[0] = p.Y0 * out.S[0];
    } else {
      out.X_inv[i] = out.X_inv[i - 1] + out.theta_inv[i - 1] * (out.S[i] - out.S[i - 1]);
      out.X_tracker[i] =
          out.X_tracker[i - 1] + out.theta_tracker[i - 1] * (out.S[i] - out.S[i - 1]);
    }
    out.V_inv[i] = exponential_value(a, table_.investor_ce(k, out.X_inv[i], Y, Yp)).value;
  };

  record(0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t k = i * m + j;
      const double theta = table_.theta_inv(k, Y, Yp);
      double d_drift = 0.0, yp_drift = 0.0;
      if (q_hat) {
        const auto& c = table_[k];
        d_drift = -a * sd2 * theta;
        yp_drift = -a * sy2 * (c.beta * theta + c.g3 + 2.0 * Yp * c.g33 + Y * c.g23);
      }
      const double n0 = rng.normal();
      const double n1 = rng.normal();
      const double n2 = rng.normal();
      const double dD = sd * sqrt_delta * n0 + d_drift * delta;
      D += dD;
      D_hat += dD + a * sd2 * theta * delta;
      // (W increment, int of W - W_k) over the step: exact joint Gaussian.
      const double dW = sy * sqrt_delta * n1;
      const double dI = sy * delta_32 * (0.5 * n1 + inv_2sqrt3 * n2);
      Y += Yp * delta + dI + 0.5 * yp_drift * delta * delta;
      Yp += dW + yp_drift * delta;
    }
    record(i + 1);
  }
}

void sample_paths(const EndogenousCoefficients& coeffs, SimGrid grid, std::size_t n_paths,
                  std::uint64_t seed, Measure measure, const PathVisitor& visit) {
  require_paths(n_paths);
  const PathSampler sampler(coeffs, grid, measure, seed);
  PathBundle bundle;
  for (std::size_t i = 0; i < n_paths; ++i) {
    sampler.sample_into(i, bundle);
    visit(bundle);
  }
}

void sample_paths(const ExogenousCoefficients& coeffs, SimGrid grid, std::size_t n_paths,
                  std::uint64_t seed, Measure measure, const PathVisitor& visit) {
  require_paths(n_paths);
  const PathSampler sampler(coeffs, grid, measure, seed);
  PathBundle bundle;
  for (std::size_t i = 0; i < n_paths; ++i) {
    sampler.sample_into(i, bundle);
    visit(bundle);
  }
}

std::vector<double> wealth_path(const PathBundle& bundle, std::span<const double> strategy,
                                double theta_0minus) {
  const std::size_t nodes = bundle.S.size();
  if (strategy.size() != nodes && strategy.size() + 1 != nodes) {
    throw Error(ErrorCode::kInvalidArgument, "strategy must have one holding per grid node");
  }
  std::vector<double> x(nodes);
  x[0] = theta_0minus * bundle.S[0];
  for (std::size_t i = 1; i < nodes; ++i) {
    x[i] = x[i - 1] + strategy[i - 1] * (bundle.S[i] - bundle.S[i - 1]);
  }
  return x;
}

double MeanEstimate::z() const {
  const double diff = mean - target;
  if (std_error > 0.0) return diff / std_error;
  return diff == 0.0 ? 0.0 : std::copysign(INFINITY, diff);
}

MartingaleReport martingale_check(const EndogenousCoefficients& coeffs, SimGrid grid,
                                  std::size_t n_paths, std::uint64_t seed,
                                  std::size_t substeps) {
  require_paths(n_paths);
  const ModelParams& p = coeffs.params();
  const PathSampler under_p(coeffs, grid, Measure::kP, seed, substeps);
  const PathSampler under_q(coeffs, grid, Measure::kQHat, seed, substeps);

  struct Slot {
    Moments value, wealth, d_hat;
  };
  const auto slots = run_blocks<Slot>(n_paths, [&](std::size_t first, std::size_t last, Slot& s) {
    PathBundle bundle;
    for (std::size_t i = first; i < last; ++i) {
      under_p.sample_into(i, bundle);
      s.value.add(bundle.V_inv.back());
      under_q.sample_into(i, bundle);
      s.wealth.add(bundle.X_inv.back());
      s.d_hat.add(bundle.D_hat.back() - bundle.D_hat.front());
    }
  });
  Slot total;
  for (const auto& s : slots) {
    total.value.merge(s.value);
    total.wealth.merge(s.wealth);
    total.d_hat.merge(s.d_hat);
  }

  const double s0 = stock_price(coeffs, 0.0, p.D0, p.Y0, p.Yp0);
  const double x0 = initial_investor_holding(p) * s0;
  const UtilityValue v0 = investor_value(coeffs, 0.0, x0, p.Y0, p.Yp0);

  MartingaleReport r;
  r.grid = grid;
  r.substeps = substeps;
  r.value_p = {total.value.mean(), total.value.std_error(), v0.value, total.value.n};
  r.wealth_q = {total.wealth.mean(), total.wealth.std_error(), x0, total.wealth.n};
  r.d_hat_q = {total.d_hat.mean(), total.d_hat.std_error(), 0.0, total.d_hat.n};
  r.saturated = v0.saturated;
  return r;
}

namespace {

double objective_on_path(const PathBundle& b, const StrategyRule& rule, double kappa) {
  const std::size_t n = b.grid.n_steps;
  const double dt = b.grid.dt();
  double x = b.Y.front() * b.S.front();
  double penalty = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double theta = rule(b.t[i], b.Y[i], b.Yp[i]);
    if (!std::isfinite(theta)) {
      char msg[160];
      std::snprintf(msg, sizeof msg, "strategy rule returned a non-finite holding at t = %.17g",
                    b.t[i]);
      throw Error(ErrorCode::kInvalidArgument, msg);
    }
    x += theta * (b.S[i + 1] - b.S[i]);
    const double dev = theta - b.Y[i];
    penalty += kappa * dev * dev * dt;
  }
  return x - penalty;
}

ObjectiveEstimate to_estimate(const Moments& m) { return {m.mean(), m.std_error(), m.n}; }

}  // namespace

ObjectiveEstimate tracker_objective(const EndogenousCoefficients& coeffs, SimGrid grid,
                                    std::size_t n_paths, std::uint64_t seed,
                                    const StrategyRule& rule) {
  require_paths(n_paths);
  const PathSampler sampler(coeffs, grid, Measure::kP, seed);
  const double kappa = coeffs.params().kappa;
  const auto slots = run_blocks<Moments>(n_paths, [&](std::size_t first, std::size_t last,
                                                      Moments& m) {
    PathBundle bundle;
    for (std::size_t i = first; i < last; ++i) {
      sampler.sample_into(i, bundle);
      m.add(objective_on_path(bundle, rule, kappa));
    }
  });
  Moments total;
  for (const auto& s : slots) total.merge(s);
  return to_estimate(total);
}

ObjectiveComparison compare_tracker_objectives(const EndogenousCoefficients& coeffs, SimGrid grid,
                                               std::size_t n_paths, std::uint64_t seed,
                                               const StrategyRule& first,
                                               const StrategyRule& second) {
  require_paths(n_paths);
  const PathSampler sampler(coeffs, grid, Measure::kP, seed);
  const double kappa = coeffs.params().kappa;
  struct Slot {
    Moments first, second, diff;
  };
  const auto slots = run_blocks<Slot>(n_paths, [&](std::size_t lo, std::size_t hi, Slot& s) {
    PathBundle bundle;
    for (std::size_t i = lo; i < hi; ++i) {
      sampler.sample_into(i, bundle);
      const double a = objective_on_path(bundle, first, kappa);
      const double b = objective_on_path(bundle, second, kappa);
      s.first.add(a);
      s.second.add(b);
      s.diff.add(a - b);
    }
  });
  Slot total;
  for (const auto& s : slots) {
    total.first.merge(s.first);
    total.second.merge(s.second);
    total.diff.merge(s.diff);
  }
  return {to_estimate(total.first), to_estimate(total.second), to_estimate(total.diff)};
}

std::string format_path_csv(const PathBundle& b) {
  std::string out;
  char line[512];
  for (std::size_t i = 0; i < b.t.size(); ++i) {
    const int len = std::snprintf(
        line, sizeof line, "%llu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
        static_cast<unsigned long long>(b.path_id), b.t[i], b.D[i], b.Yp[i], b.Y[i], b.S[i],
        b.theta_inv[i], b.theta_tracker[i], b.X_inv[i], b.V_inv[i]);
    out.append(line, static_cast<std::size_t>(len));
  }
  return out;
}

}  // namespace radner::sim
