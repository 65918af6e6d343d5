#pragma once

#include <random>

#include "acousto/elliptic.hpp"
#include "acousto/equilibria.hpp"

namespace acousto {

/// Seeded generator of smooth random fields.  Radial profiles are drawn
/// inside the solver-exact class (powers r^(l+2j) on the ball, low-degree
/// Legendre polynomials on the shell) so that property tests exercise
/// identities rather than representation error.
class FieldSampler {
 public:
  explicit FieldSampler(std::uint64_t seed) : rng_(seed) {}

  double gauss() { return normal_(rng_); }
  cplx cgauss(bool real_valued) {
    return real_valued ? cplx(gauss()) : cplx(gauss(), gauss());
  }
  std::mt19937_64& rng() { return rng_; }

  SurfaceField surface(const SpacePtr& sp, bool real_valued = true) {
    SurfaceField f(sp);
    for (int i = 0; i < sp->n_modes; ++i)
      f.coeffs[i] = cgauss(real_valued) * mode_decay(sp->mode_l[i]);
    return f;
  }

  /// Strictly positive random coefficient field (for mu/sigma draws).
  SurfaceField positive_surface(const SpacePtr& sp, double floor_value = 0.5) {
    SurfaceField f = surface(sp, true);
    f.coeffs *= 0.2;
    double minv = nodal_values(sp->surface, f).minCoeff();
    f += cplx(floor_value - std::min(0.0, minv)) * SurfaceField::one(sp);
    return f;
  }

  // Profiles are kept deeply band-limited (degree well below n_r) so that
  // elliptic solves and reconstructions of the sampled fields stay exact in
  // the discretization; this mirrors how the resolution should be chosen
  // relative to the data in actual runs.
  Eigen::VectorXcd radial_profile(const SpacePtr& sp, int l, bool real_valued = true) {
    const auto& geo = sp->geometry;
    Eigen::VectorXcd prof = Eigen::VectorXcd::Zero(sp->n_r);
    if (geo.has_gamma0()) {
      int kmax = std::min(5, sp->n_r - 4);
      for (int k = 0; k <= kmax; ++k) {
        cplx g = cgauss(real_valued) * std::pow(0.5, k);
        for (int j = 0; j < sp->n_r; ++j) {
          double rho = (2.0 * sp->radial_nodes[j] - (geo.inner_radius + geo.outer_radius)) /
                       (geo.outer_radius - geo.inner_radius);
          double p, dp;
          GaussLegendre::legendre_pair(k, rho, p, dp);
          prof[j] += g * p;
        }
      }
    } else {
      int jmax = std::min(3, (sp->n_r - 4 - l) / 2);
      for (int k = 0; k <= std::max(0, jmax); ++k) {
        cplx g = cgauss(real_valued) * std::pow(1.0 / 3.0, k);
        for (int j = 0; j < sp->n_r; ++j)
          prof[j] += g * std::pow(sp->radial_nodes[j] / geo.outer_radius, l + 2 * k);
      }
    }
    return prof;
  }

  ScalarBulkField bulk(const SpacePtr& sp, bool real_valued = true) {
    ScalarBulkField f(sp);
    for (int i = 0; i < sp->n_modes; ++i)
      f.data.row(i) =
          (mode_decay(sp->mode_l[i]) * radial_profile(sp, sp->mode_l[i], real_valued)).transpose();
    return f;
  }

  ToroidalField toroidal(const SpacePtr& sp, bool real_valued = true) {
    ToroidalField f(sp);
    for (int i = 1; i < sp->n_modes; ++i)
      f.t.row(i) =
          (mode_decay(sp->mode_l[i]) * radial_profile(sp, sp->mode_l[i], real_valued)).transpose();
    return f;
  }

  VectorField vector_field(const SpacePtr& sp, bool real_valued = true) {
    return VectorField(bulk(sp, real_valued), toroidal(sp, real_valued));
  }

  ConfigurationPair pair(const SpacePtr& sp, bool real_valued = true) {
    return ConfigurationPair(vector_field(sp, real_valued), surface(sp, real_valued));
  }

  /// Random element of the smallest configuration space, built by solving
  /// the curl-free flux problem against a compatibility-adjusted source.
  ConfigurationPair pair_in_L0(const SpacePtr& sp, bool real_valued = true) {
    SurfaceField z = surface(sp, real_valued);
    ScalarBulkField w = bulk(sp, real_valued);
    cplx imbalance = integrate_volume(w) + integrate_surface(z);
    w -= ScalarBulkField::constant(sp, imbalance / sp->geometry.volume());
    VectorField s = solve_div_curl(w, SurfaceField::zero(sp), z);
    return ConfigurationPair(std::move(s), std::move(z));
  }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};

  static double mode_decay(int l) { return std::exp(-0.5 * l); }
};

}  // namespace acousto
