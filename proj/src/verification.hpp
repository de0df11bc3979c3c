#pragma once

// Substitutes constructed coefficients back into the coefficient ODEs and the
// algebraic identities of both equilibria and reports sup-norm residuals.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "core_solution.hpp"
#include "endogenous.hpp"
#include "exogenous.hpp"

namespace radner::verify {

// Residual grid stops this far short of t = 1.
inline constexpr double kEndpointGap = 1e-6;
inline constexpr double kFiniteDifferenceStep = 1e-6;

struct ResidualRow {
  std::string equation;
  double max_residual = 0.0;  // interpolant / analytic derivative
  double argmax_t = 0.0;
  double fd_residual = 0.0;   // central difference cross-check
};

struct ResidualReport {
  ModelKind model = ModelKind::kEndogenous;
  std::vector<ResidualRow> rows;
  double terminal_max = 0.0;  // max |f(1)| over all functions
  std::string terminal_worst;
  double endpoint_max = 0.0;  // max residual evaluated exactly at t = 1
  std::string endpoint_worst;

  const ResidualRow& worst() const;
  double max_residual() const { return worst().max_residual; }
  // Throws Error(kResidualExceedsTolerance) naming the worst equation and t.
  void require_below(double tol) const;
};

ResidualReport residuals_endogenous(const EndogenousCoefficients& coeffs, std::size_t grid_size);
ResidualReport residuals_exogenous(const ExogenousCoefficients& coeffs, std::size_t grid_size);

// Right-hand sides of the coefficient ODEs evaluated at t, in kAll order.
std::vector<double> endogenous_rhs(const EndogenousCoefficients& coeffs, double t);
std::vector<double> exogenous_rhs(const ExogenousCoefficients& coeffs, double t);

// Maximizers of the drift of the value processes, written in terms of
// mu', alpha', beta' rather than the closed-form strategies.
double investor_drift_maximizer(const EndogenousCoefficients& coeffs, double t, double Y, double Yp);
double tracker_drift_maximizer(const EndogenousCoefficients& coeffs, double t, double Y, double Yp);

struct OptimizerIdentityReport {
  double investor_max_dev = 0.0;
  double tracker_max_dev = 0.0;
  std::size_t samples = 0;
};

// Draws t ~ U[0, 1 - 1e-3], Y, Y' ~ 3 N(0, 1). Throws Error(kIdentityViolation)
// above the threshold.
OptimizerIdentityReport check_pointwise_optimizers(const EndogenousCoefficients& coeffs,
                                                   std::size_t n_samples, std::uint64_t seed,
                                                   double threshold = 1e-6);

// max |I theta_inv + theta_tracker - Sigma|. Throws Error(kClearingViolation).
double check_clearing(const EndogenousCoefficients& coeffs, std::size_t n_samples,
                      std::uint64_t seed, double threshold = 1e-12);
// max |I theta_inv + Y - Sigma| for the exogenous baseline.
double check_clearing_exogenous(const ModelParams& params, std::size_t n_samples,
                                std::uint64_t seed, double threshold = 1e-12);

struct BoundReport {
  // With sigma_Yp = 0 the bounds are attained and are checked as equalities.
  bool equality_mode = false;
  double min_z1 = 0.0;               // min z1(s) / (C1 s^2) over the grid
  double min_z2 = 0.0;               // min z2(s) / (C2 s^3)
  double min_z1_deficit = 0.0;       // min (C1 s^2 - z1) / (C1 s^2)
  double min_z2_deficit = 0.0;
  double max_equality_gap = 0.0;     // equality mode only
  double taylor_ratio = 0.0;         // z1(1e-3) / (1e-6 C1); -> 1
  std::size_t grid_points = 0;
};

// Throws Error(kBoundViolation) with the offending s.
BoundReport check_positivity_bounds(const CoreSolution& core, std::size_t grid_size = 1001);

struct DecouplingReport {
  double g1_rate_max_dev = 0.0;  // |g1' + a Sigma^2 sigma_D^2 / (2 I^2) + sigma_Yp^2 g33|
  double mu_max_dev = 0.0;       // |mu - a Sigma sigma_D^2 (t - 1) / I|
};

DecouplingReport check_exogenous_decoupling(const ExogenousCoefficients& coeffs,
                                            std::size_t grid_size);

}  // namespace radner::verify
