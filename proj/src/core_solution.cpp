#include "core_solution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "error.hpp"

namespace radner {

CoreSolution::CoreSolution(ModelKind kind, const ModelParams& params, double bound1,
                           double bound2, ode::DenseSolution dense, double tol)
    : kind_(kind),
      params_(params),
      bound1_(bound1),
      bound2_(bound2),
      dense_(std::make_shared<const ode::DenseSolution>(std::move(dense))),
      tol_(tol) {}

double CoreSolution::z1(double s) const { return bound1_ * s * s - dense_->eval(s, 0); }
double CoreSolution::z2(double s) const { return bound2_ * s * s * s - dense_->eval(s, 1); }

double CoreSolution::z1_rate(double s) const {
  return 2.0 * bound1_ * s - dense_->derivative(s, 0);
}
double CoreSolution::z2_rate(double s) const {
  return 3.0 * bound2_ * s * s - dense_->derivative(s, 1);
}

bool CoreSolution::has(Quadrature q) const noexcept {
  return 2 + static_cast<std::size_t>(q) < dense_->dimension();
}

std::size_t CoreSolution::index(Quadrature q) const {
  if (!has(q)) throw Error(ErrorCode::kInvalidArgument, "quadrature not carried by this model");
  return 2 + static_cast<std::size_t>(q);
}

double CoreSolution::quadrature(Quadrature q, double s) const { return dense_->eval(s, index(q)); }

double CoreSolution::quadrature_rate(Quadrature q, double s) const {
  return dense_->derivative(s, index(q));
}

double checked_time(double t) {
  if (!(t >= -ode::kDomainSlack && t <= 1.0 + ode::kDomainSlack)) {
    std::ostringstream msg;
    msg << "t = " << t << " outside [0, 1]";
    throw Error(ErrorCode::kOutOfDomain, msg.str());
  }
  return std::clamp(t, 0.0, 1.0);
}

void require_same_model(const ModelParams& p, const CoreSolution& core, ModelKind kind) {
  const ModelParams& q = core.params();
  const bool same = core.kind() == kind && p.I == q.I && p.a == q.a && p.sigma_D == q.sigma_D &&
                    p.sigma_Yp == q.sigma_Yp && p.Sigma == q.Sigma &&
                    (kind == ModelKind::kExogenous || p.kappa == q.kappa);
  if (!same) {
    throw Error(ErrorCode::kInvalidArgument, "core solution was solved for different parameters");
  }
}

double core_max_step(double tol) {
  return std::min(1.0, (1.0 / 64.0) * std::pow(tol / kDefaultTol, 0.2));
}

}  // namespace radner
