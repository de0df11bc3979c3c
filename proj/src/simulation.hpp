#pragma once

// Monte Carlo engine for the state (D, Y', Y), the equilibrium price and the
// wealth and value processes of both agent types.
//
// Y' and its time integral are sampled from their exact joint Gaussian law,
// so Y carries no discretization bias. Stochastic integrals use left-point
// sums. Every path draws from its own Philox stream keyed by (seed, measure,
// path index); results are independent of thread count.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "endogenous.hpp"
#include "exogenous.hpp"

namespace radner::sim {

inline constexpr std::size_t kDefaultSteps = 1024;
inline constexpr std::size_t kDefaultPaths = 100000;
// Paths are accumulated in fixed blocks and the blocks reduced in order.
inline constexpr std::size_t kBlockSize = 1024;

struct SimGrid {
  std::size_t n_steps = kDefaultSteps;

  double dt() const { return 1.0 / static_cast<double>(n_steps); }
  double time(std::size_t i) const {
    return i == n_steps ? 1.0 : static_cast<double>(i) / static_cast<double>(n_steps);
  }
  std::size_t nodes() const { return n_steps + 1; }
};

enum class Measure { kP, kQHat };

struct PathBundle {
  SimGrid grid;
  Measure measure = Measure::kP;
  std::uint64_t path_id = 0;
  std::vector<double> t, D, Yp, Y, S;
  std::vector<double> theta_inv, theta_tracker;
  std::vector<double> X_inv, X_tracker;
  std::vector<double> V_inv;
  // D + int a sigma_D^2 theta_inv dt, a Brownian motion under Q-hat.
  std::vector<double> D_hat;
};

// Coefficients and affine strategy loadings tabulated on a uniform grid.
class EquilibriumTable {
 public:
  struct Node {
    double t;
    double alpha, beta, mu;
    double g1, g2, g3, g22, g23, g33;
    // theta = c0 + cY Y + cYp Y'
    double inv0, invY, invYp;
    double tr0, trY, trYp;
  };

  EquilibriumTable(const EndogenousCoefficients& coeffs, std::size_t n_steps);
  EquilibriumTable(const ExogenousCoefficients& coeffs, std::size_t n_steps);

  ModelKind kind() const noexcept { return kind_; }
  const ModelParams& params() const noexcept { return params_; }
  std::size_t n_steps() const noexcept { return nodes_.size() - 1; }
  const Node& operator[](std::size_t i) const { return nodes_[i]; }

  double price(std::size_t i, double D, double Y, double Yp) const;
  double theta_inv(std::size_t i, double Y, double Yp) const;
  double theta_tracker(std::size_t i, double Y, double Yp) const;
  double investor_ce(std::size_t i, double x, double Y, double Yp) const;

 private:
  ModelKind kind_;
  ModelParams params_;
  std::vector<Node> nodes_;
};

class PathSampler {
 public:
  // `substeps` fine steps are simulated per grid step. Increments are
  // aggregated exactly, so (n, 2) and (2n, 1) share the same Brownian path
  // and differ only in trading frequency. Q-hat with exogenous coefficients
  // throws Error(kInvalidMeasure).
  PathSampler(const EndogenousCoefficients& coeffs, SimGrid grid, Measure measure,
              std::uint64_t seed, std::size_t substeps = 1);
  PathSampler(const ExogenousCoefficients& coeffs, SimGrid grid, Measure measure,
              std::uint64_t seed, std::size_t substeps = 1);

  const SimGrid& grid() const noexcept { return grid_; }
  Measure measure() const noexcept { return measure_; }
  const ModelParams& params() const noexcept { return table_.params(); }
  const EquilibriumTable& table() const noexcept { return table_; }

  PathBundle sample(std::uint64_t path_id) const;
  // Reuses the storage of `out`.
  void sample_into(std::uint64_t path_id, PathBundle& out) const;

 private:
  SimGrid grid_;
  Measure measure_;
  std::uint64_t seed_;
  std::size_t substeps_;
  EquilibriumTable table_;
};

using PathVisitor = std::function<void(const PathBundle&)>;

// Generates n_paths bundles and hands them to visit in path order.
void sample_paths(const EndogenousCoefficients& coeffs, SimGrid grid, std::size_t n_paths,
                  std::uint64_t seed, Measure measure, const PathVisitor& visit);
void sample_paths(const ExogenousCoefficients& coeffs, SimGrid grid, std::size_t n_paths,
                  std::uint64_t seed, Measure measure, const PathVisitor& visit);

// X_0 = theta_0minus S_0, X_{i+1} = X_i + theta_i (S_{i+1} - S_i).
std::vector<double> wealth_path(const PathBundle& bundle, std::span<const double> strategy,
                                double theta_0minus);

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  double target = 0.0;
  std::size_t n = 0;

  double z() const;
};

struct MartingaleReport {
  SimGrid grid;
  std::size_t substeps = 1;
  MeanEstimate value_p;   // -exp(-a X_1) under P against V(0, X_0, Y_0, Y'_0)
  MeanEstimate wealth_q;  // X_1 under Q-hat against X_0
  MeanEstimate d_hat_q;   // D-hat_1 - D-hat_0 under Q-hat against 0
  bool saturated = false; // target value hit the exponent clamp
};

MartingaleReport martingale_check(const EndogenousCoefficients& coeffs, SimGrid grid,
                                  std::size_t n_paths, std::uint64_t seed,
                                  std::size_t substeps = 1);

// Holdings as a function of (t, Y, Y').
using StrategyRule = std::function<double(double t, double Y, double Yp)>;

struct ObjectiveEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

// E[X_1 - int kappa (theta - Y)^2 dt] under P with X_0 = Y_0 S_0 and the
// penalty by the left-point rule. Throws Error(kInvalidArgument) when the
// rule returns a non-finite holding.
ObjectiveEstimate tracker_objective(const EndogenousCoefficients& coeffs, SimGrid grid,
                                    std::size_t n_paths, std::uint64_t seed,
                                    const StrategyRule& rule);

struct ObjectiveComparison {
  ObjectiveEstimate first, second;
  // first - second, paired path by path (common random numbers).
  ObjectiveEstimate difference;
};

ObjectiveComparison compare_tracker_objectives(const EndogenousCoefficients& coeffs, SimGrid grid,
                                               std::size_t n_paths, std::uint64_t seed,
                                               const StrategyRule& first,
                                               const StrategyRule& second);

// Optional path dump, one CSV row per grid node, 17 significant digits.
inline constexpr const char* kPathCsvHeader =
    "path_id,t,D,Yp,Y,S,theta_inv,theta_tracker,X_inv,V_inv";
std::string format_path_csv(const PathBundle& bundle);

}  // namespace radner::sim
