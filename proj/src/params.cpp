#include "params.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "error.hpp"

namespace radner {

ModelParams ModelParams::figure1_base(double a) {
  ModelParams p;
  p.a = a;
  return p.with_equal_holdings();
}

ModelParams& ModelParams::with_equal_holdings() {
  if (I > 0) theta0.assign(static_cast<std::size_t>(I), (Sigma - Y0) / I);
  return *this;
}

std::vector<std::string> ModelParams::violations() const {
  std::vector<std::string> out;
  auto finite = [&](double v, const char* name) {
    if (!std::isfinite(v)) out.push_back(std::string(name) + " must be finite");
    return std::isfinite(v);
  };
  if (I < 1) out.push_back("I must be a positive integer");
  if (finite(a, "a") && !(a > 0.0)) out.push_back("a must be > 0");
  if (finite(sigma_D, "sigma_D") && !(sigma_D > 0.0)) out.push_back("sigma_D must be > 0");
  if (finite(sigma_Yp, "sigma_Yp") && !(sigma_Yp >= 0.0)) out.push_back("sigma_Yp must be >= 0");
  if (finite(kappa, "kappa") && !(kappa > 0.0)) out.push_back("kappa must be > 0");
  if (finite(Sigma, "Sigma") && !(Sigma >= 0.0)) out.push_back("Sigma must be >= 0");
  finite(Y0, "Y0");
  finite(Yp0, "Yp0");
  finite(D0, "D0");
  if (I >= 1 && theta0.size() != static_cast<std::size_t>(I)) {
    std::ostringstream msg;
    msg << "theta0 must list one initial holding per investor (" << I << "), got "
        << theta0.size();
    out.push_back(msg.str());
  } else if (I >= 1) {
    const double held = std::accumulate(theta0.begin(), theta0.end(), 0.0);
    const double scale = std::max({1.0, std::abs(Sigma), std::abs(Y0)});
    if (!(std::abs(held + Y0 - Sigma) <= kHoldingsTolerance * scale)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "sum(theta0) + Y0 must equal Sigma (sum(theta0) = " << held << ", Y0 = " << Y0
          << ", Sigma = " << Sigma << ")";
      out.push_back(msg.str());
    }
  }
  return out;
}

void ModelParams::validate() const {
  const auto v = violations();
  if (v.empty()) return;
  std::string joined;
  for (const auto& s : v) {
    if (!joined.empty()) joined += "; ";
    joined += s;
  }
  throw Error(ErrorCode::kConfigInvalid, joined);
}

}  // namespace radner
