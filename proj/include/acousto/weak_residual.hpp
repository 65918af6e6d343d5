#pragma once

#include "acousto/dynamics.hpp"
#include "acousto/random_fields.hpp"

namespace acousto {

/// Space-time residual of a trajectory against the model's distributional
/// identities, probed with random separable test functions: a smooth
/// compactly supported time profile times a band-limited spatial field
/// obeying the test-class trace constraints.  Time integrals use composite
/// Simpson quadrature on the output grid.
struct WeakResidualReport {
  double max_relative_residual = 0.0;
  int n_tests = 0;
};

namespace detail {

/// chi(t) = ((t-t0)(t1-t))^4, normalized; vanishes to high order at both
/// ends so no boundary terms survive.
struct TimeBump {
  double t0, t1, norm;
  TimeBump(double a, double b) : t0(a), t1(b) {
    double mid = 0.5 * (a + b);
    norm = std::pow((mid - t0) * (t1 - mid), 4);
  }
  double value(double t) const { return std::pow((t - t0) * (t1 - t), 4) / norm; }
  double deriv(double t) const {
    return 4.0 * std::pow((t - t0) * (t1 - t), 3) * ((t1 - t) - (t - t0)) / norm;
  }
};

/// Composite Simpson weights over the trajectory grid (uniform spacing,
/// even interval count; a trailing point is dropped if needed and the bump
/// is supported on the kept range).
inline std::vector<double> simpson_weights(const std::vector<double>& times, std::size_t& n_used) {
  n_used = times.size();
  if (n_used < 5) throw std::invalid_argument("weak residual: trajectory has too few outputs");
  if ((n_used - 1) % 2 != 0) --n_used;
  double h = (times[n_used - 1] - times[0]) / (n_used - 1);
  std::vector<double> w(n_used, 0.0);
  for (std::size_t k = 0; k + 2 < n_used; k += 2) {
    w[k] += h / 3.0;
    w[k + 1] += 4.0 * h / 3.0;
    w[k + 2] += h / 3.0;
  }
  return w;
}

/// Random curl-free-plus-toroidal test field with zero normal trace on
/// Gamma0, and the matched membrane test psi = -phi.nu on Gamma1.
inline VectorField boundary_test_field(FieldSampler& sampler, const SpacePtr& sp) {
  ScalarBulkField pot = sampler.bulk(sp);
  if (sp->geometry.has_gamma0()) {
    // remove the normal derivative at the inner sphere mode by mode
    Eigen::VectorXcd da = mul_cr_vec(pot.data, sp->deriv_a);
    for (int i = 0; i < sp->n_modes; ++i)
      for (int j = 0; j < sp->n_r; ++j)
        pot.data(i, j) -= da[i] * (sp->radial_nodes[j] - sp->geometry.inner_radius);
  }
  return VectorField(std::move(pot), sampler.toroidal(sp));
}

inline cplx bilinear_surface(const Eigen::MatrixXd& form, const SurfaceField& test,
                             const SurfaceField& f) {
  return dot_rc(form * test.coeffs.real().eval(), f.coeffs);
}

}  // namespace detail

inline WeakResidualReport weak_residual(const Trajectory& traj, const Coefficients& coeffs,
                                        int n_tests = 10, std::uint64_t seed = 1234) {
  const SpacePtr& sp = traj.space();
  SurfaceForms forms = SurfaceForms::build(coeffs);
  FieldSampler sampler(seed);
  std::size_t n_used = 0;
  std::vector<double> wt = detail::simpson_weights(traj.times, n_used);
  detail::TimeBump bump(traj.times.front(), traj.times[n_used - 1]);
  const double rho0 = coeffs.rho0, B = coeffs.bulk_modulus;
  const double b2 = sp->geometry.outer_radius * sp->geometry.outer_radius;

  WeakResidualReport rep;
  rep.n_tests = n_tests;

  auto track = [&rep](cplx residual, double scale) {
    rep.max_relative_residual =
        std::max(rep.max_relative_residual, std::abs(residual) / std::max(scale, 1e-300));
  };

  for (int test = 0; test < n_tests; ++test) {
    if (!traj.lagrangian.empty()) {
      VectorField phi = detail::boundary_test_field(sampler, sp);
      SurfaceField psi = cplx(-1.0) * normal_trace(phi, BoundaryPart::Gamma1);
      ScalarBulkField div_phi = divergence(phi);
      cplx res = 0.0;
      double scale = 0.0;
      for (std::size_t k = 0; k < n_used; ++k) {
        const auto& st = traj.lagrangian[k];
        double c = bump.value(st.t) * wt[k], cp = bump.deriv(st.t) * wt[k];
        cplx t1 = rho0 * inner_vector(phi, st.r_t);
        cplx t2 = b2 * detail::bilinear_surface(forms.gram_mu, psi, st.v_t);
        cplx t3 = B * inner_volume(div_phi, divergence(st.r));
        cplx t4 = detail::bilinear_surface(forms.stiff_sigma, psi, st.v);
        cplx t5 = b2 * (detail::bilinear_surface(forms.gram_delta, psi, st.v_t) +
                        detail::bilinear_surface(forms.gram_kappa, psi, st.v));
        res += cp * (t1 + t2) - c * (t3 + t4 + t5);
        scale += std::abs(cp) * (std::abs(t1) + std::abs(t2)) +
                 std::abs(c) * (std::abs(t3) + std::abs(t4) + std::abs(t5));
      }
      track(res, scale);
    } else if (!traj.eulerian.empty()) {
      // first identity: scalar test against the pressure equation
      {
        ScalarBulkField phi = sampler.bulk(sp);
        VectorField grad_phi = VectorField::gradient(phi);
        SurfaceField tr_phi = phi.trace_gamma1();
        cplx res = 0.0;
        double scale = 0.0;
        for (std::size_t k = 0; k < n_used; ++k) {
          const auto& st = traj.eulerian[k];
          double c = bump.value(st.t) * wt[k], cp = bump.deriv(st.t) * wt[k];
          cplx t1 = inner_volume(phi, st.p);
          cplx t2 = B * inner_vector(grad_phi, st.vvec);
          cplx t3 = B * inner_surface(tr_phi, st.v_t);
          res += cp * t1 + c * (t2 + t3);
          scale += std::abs(cp) * std::abs(t1) + std::abs(c) * (std::abs(t2) + std::abs(t3));
        }
        track(res, scale);
      }
      // second identity: vector test against the momentum/membrane rows
      {
        VectorField phi = detail::boundary_test_field(sampler, sp);
        SurfaceField psi = cplx(-1.0) * normal_trace(phi, BoundaryPart::Gamma1);
        ScalarBulkField div_phi = divergence(phi);
        cplx res = 0.0;
        double scale = 0.0;
        for (std::size_t k = 0; k < n_used; ++k) {
          const auto& st = traj.eulerian[k];
          double c = bump.value(st.t) * wt[k], cp = bump.deriv(st.t) * wt[k];
          cplx t1 = rho0 * inner_vector(phi, st.vvec);
          cplx t2 = b2 * detail::bilinear_surface(forms.gram_mu, psi, st.v_t);
          cplx t3 = inner_volume(div_phi, st.p);
          cplx t4 = detail::bilinear_surface(forms.stiff_sigma, psi, st.v);
          cplx t5 = b2 * (detail::bilinear_surface(forms.gram_delta, psi, st.v_t) +
                          detail::bilinear_surface(forms.gram_kappa, psi, st.v));
          res += cp * (t1 + t2) + c * (t3 - t4 - t5);
          scale += std::abs(cp) * (std::abs(t1) + std::abs(t2)) +
                   std::abs(c) * (std::abs(t3) + std::abs(t4) + std::abs(t5));
        }
        track(res, scale);
      }
    } else if (!traj.potential.empty()) {
      // wave part
      {
        ScalarBulkField phi = sampler.bulk(sp);
        VectorField grad_phi = VectorField::gradient(phi);
        SurfaceField tr_phi = phi.trace_gamma1();
        cplx res = 0.0;
        double scale = 0.0;
        for (std::size_t k = 0; k < n_used; ++k) {
          const auto& st = traj.potential[k];
          double c = bump.value(st.t) * wt[k], cp = bump.deriv(st.t) * wt[k];
          cplx t1 = rho0 * inner_volume(phi, st.u_t);
          cplx t2 = B * inner_vector(grad_phi, VectorField::gradient(st.u));
          cplx t3 = B * inner_surface(tr_phi, st.v_t);
          res += -cp * t1 + c * (t2 - t3);
          scale += std::abs(cp) * std::abs(t1) + std::abs(c) * (std::abs(t2) + std::abs(t3));
        }
        track(res, scale);
      }
      // membrane part
      {
        SurfaceField psi = sampler.surface(sp);
        cplx res = 0.0;
        double scale = 0.0;
        for (std::size_t k = 0; k < n_used; ++k) {
          const auto& st = traj.potential[k];
          double c = bump.value(st.t) * wt[k], cp = bump.deriv(st.t) * wt[k];
          cplx t1 = b2 * detail::bilinear_surface(forms.gram_mu, psi, st.v_t);
          cplx t2 = detail::bilinear_surface(forms.stiff_sigma, psi, st.v);
          cplx t3 = b2 * (detail::bilinear_surface(forms.gram_delta, psi, st.v_t) +
                          detail::bilinear_surface(forms.gram_kappa, psi, st.v));
          cplx t4 = rho0 * inner_surface(psi, st.u.trace_gamma1());
          res += -cp * t1 + c * (t2 + t3) - cp * t4;
          scale += std::abs(cp) * (std::abs(t1) + std::abs(t4)) +
                   std::abs(c) * (std::abs(t2) + std::abs(t3));
        }
        track(res, scale);
      }
    } else {
      throw std::invalid_argument("weak residual: empty trajectory");
    }
  }
  return rep;
}

}  // namespace acousto
