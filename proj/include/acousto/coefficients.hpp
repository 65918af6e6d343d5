#pragma once

#include <stdexcept>

#include "acousto/fields.hpp"
#include "acousto/membrane.hpp"

namespace acousto {

/// Physical constants and the boundary coefficient fields mu, sigma,
/// delta, kappa on Gamma1.  The standing assumptions min mu > 0,
/// min sigma > 0, kappa >= 0 are checked at the quadrature nodes.
struct Coefficients {
  double rho0 = 1.0;
  double bulk_modulus = 1.0;  // B
  SurfaceField mu, sigma, delta, kappa;

  double mu_min = 0.0, sigma_min = 0.0, kappa_min = 0.0;
  bool kappa_zero = false;

  Coefficients() = default;
  Coefficients(double rho0_, double B_, SurfaceField mu_, SurfaceField sigma_,
               SurfaceField delta_, SurfaceField kappa_)
      : rho0(rho0_), bulk_modulus(B_), mu(std::move(mu_)), sigma(std::move(sigma_)),
        delta(std::move(delta_)), kappa(std::move(kappa_)) {
    validate();
  }

  static Coefficients constants(const SpacePtr& sp, double rho0, double B, double mu0,
                                double sigma0, double delta0, double kappa0) {
    auto c = [&](double v) { return cplx(v) * SurfaceField::one(sp); };
    return Coefficients(rho0, B, c(mu0), c(sigma0), c(delta0), c(kappa0));
  }

  const SpacePtr& space() const { return mu.space; }

  void validate() {
    require_same_space(mu.space, sigma.space, "coefficients");
    require_same_space(mu.space, delta.space, "coefficients");
    require_same_space(mu.space, kappa.space, "coefficients");
    if (!(rho0 > 0.0)) throw std::invalid_argument("coefficients: rho0 > 0 is required");
    if (!(bulk_modulus > 0.0)) throw std::invalid_argument("coefficients: B > 0 is required");
    const auto& rule = mu.space->surface;
    Eigen::VectorXd mu_n = nodal_values(rule, mu);
    Eigen::VectorXd sig_n = nodal_values(rule, sigma);
    Eigen::VectorXd kap_n = nodal_values(rule, kappa);
    nodal_values(rule, delta);  // rejects complex-valued delta
    mu_min = mu_n.minCoeff();
    sigma_min = sig_n.minCoeff();
    kappa_min = kap_n.minCoeff();
    kappa_zero = kappa.coeffs.cwiseAbs().maxCoeff() == 0.0;
    if (!(mu_min > 0.0)) throw std::invalid_argument("coefficients: min mu > 0 is required");
    if (!(sigma_min > 0.0)) throw std::invalid_argument("coefficients: min sigma > 0 is required");
    if (kappa_min < -1e-14 * std::max(1.0, kap_n.cwiseAbs().maxCoeff()))
      throw std::invalid_argument("coefficients: kappa >= 0 is required");
  }
};

}  // namespace acousto
