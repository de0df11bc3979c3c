#pragma once

#include <string>
#include <vector>

namespace radner {

// Exogenous scalars of the economy shared by both equilibrium models.
struct ModelParams {
  int I = 10;              // number of exponential investors
  double a = 1.0;          // common absolute risk aversion
  double sigma_D = 1.0;    // dividend volatility
  double sigma_Yp = 10.0;  // volatility of the noise rate Y'
  double kappa = 5.0;      // tracking penalty (ignored by the exogenous model)
  double Sigma = 1.0;      // stock supply
  double Y0 = 0.0;
  double Yp0 = 0.0;
  double D0 = 0.0;
  std::vector<double> theta0;  // initial investor holdings, one per investor

  // Base point of the welfare panels: I=10, sigma_D=1, sigma_Yp=10, kappa=5,
  // Sigma=1, Y0=Yp0=0, investors splitting the supply equally.
  static ModelParams figure1_base(double a = 1.0);

  // Replaces theta0 by the equal split (Sigma - Y0) / I.
  ModelParams& with_equal_holdings();

  // Every violated invariant, in a fixed order. Empty when valid.
  std::vector<std::string> violations() const;

  // Throws Error(kConfigInvalid) listing all violations.
  void validate() const;

  // Shorthands used throughout both models.
  double risk_var() const { return a * sigma_D * sigma_D; }        // a sigma_D^2
  double noise_var() const { return sigma_Yp * sigma_Yp; }         // sigma_Yp^2
  double tracker_scale() const { return 2.0 * I * kappa + risk_var(); }  // 2 I kappa + a sigma_D^2
};

inline constexpr double kHoldingsTolerance = 1e-12;

}  // namespace radner
