#pragma once

#include "acousto/dynamics.hpp"

namespace acousto {

/// Inter-model transfer operators on trajectories.  Trajectories, not
/// abstract solution classes, are the operator domain; equality in the
/// quotient-by-stationary sense is decided by stationary_difference.

/// Displacement -> pressure/velocity: p = -B div r, vvec = r_t, v = v.
inline Trajectory lagrangian_to_eulerian(const Trajectory& traj, const Coefficients& coeffs) {
  if (traj.lagrangian.empty())
    throw std::invalid_argument("transfer: a displacement trajectory is required");
  Trajectory out;
  out.tag = ModelTag::Eulerian;
  out.diag = traj.diag;
  for (const auto& st : traj.lagrangian) {
    out.push_time(st.t);
    ScalarBulkField p = cplx(-coeffs.bulk_modulus) * divergence(st.r);
    out.eulerian.emplace_back(std::move(p), st.r_t, st.v, st.v_t, st.t);
  }
  return out;
}

/// Constrained pressure/velocity -> the trace-matched displacement
/// representative: per state solve div r = -p/B, curl r = 0, traces
/// (0, -v).  The result is the unique constrained-model preimage.
inline Trajectory eulerian_to_lagrangian(const Trajectory& traj, const Coefficients& coeffs,
                                         double tol = 1e-9) {
  if (traj.eulerian.empty())
    throw std::invalid_argument("transfer: a pressure/velocity trajectory is required");
  const SpacePtr& sp = traj.space();
  Trajectory out;
  out.tag = ModelTag::L0;
  out.diag = traj.diag;
  for (const auto& st : traj.eulerian) {
    cplx c11 = integrate_volume(st.p) - coeffs.bulk_modulus * integrate_surface(st.v);
    double scale = st.p.l2_norm() * std::sqrt(sp->geometry.volume()) +
                   coeffs.bulk_modulus * st.v.l2_norm() * std::sqrt(sp->geometry.area_gamma1());
    if (std::abs(c11) > tol * std::max(scale, 1e-300))
      throw CompatibilityError(
          "transfer: pressure/velocity state violates the integral constraint, no "
          "trace-matched preimage exists");
    ScalarBulkField w = cplx(-1.0 / coeffs.bulk_modulus) * st.p;
    VectorField r = solve_div_curl_balanced(w, SurfaceField::zero(sp), st.v,
                                            ToroidalField::zero(sp), std::max(scale, 1.0));
    out.push_time(st.t);
    out.lagrangian.emplace_back(std::move(r), st.v, st.vvec, st.v_t, st.t);
  }
  return out;
}

/// Displacement -> potential: u_t = -(B/rho0) div r pointwise in time and
/// -grad u = r_t per state, both exact by construction; the only genuinely
/// accumulated quantity is the spatial mean of u, integrated from the
/// boundary flux with the stepper's own (trapezoid) quadrature.  The t = 0
/// representative has zero volume mean.
inline Trajectory lagrangian_to_potential(const Trajectory& traj, const Coefficients& coeffs) {
  if (traj.lagrangian.empty())
    throw std::invalid_argument("transfer: a displacement trajectory is required");
  const SpacePtr& sp = traj.space();
  Trajectory out;
  out.tag = ModelTag::Potential;
  out.diag = traj.diag;
  const double c = -coeffs.bulk_modulus / coeffs.rho0;
  const double vol = sp->geometry.volume();
  auto flux = [&sp](const LagrangianState& st) {
    cplx f = integrate_surface(normal_trace(st.r, BoundaryPart::Gamma1));
    if (sp->geometry.has_gamma0()) {
      double a = sp->geometry.inner_radius;
      f += a * a * std::sqrt(4.0 * M_PI) *
           normal_trace(st.r, BoundaryPart::Gamma0).coeffs[0];
    }
    return f;
  };
  cplx mean_u = 0.0;
  cplx mean_ut_prev = (c / vol) * flux(traj.lagrangian.front());
  double t_prev = traj.lagrangian.front().t;
  for (std::size_t k = 0; k < traj.lagrangian.size(); ++k) {
    const auto& st = traj.lagrangian[k];
    cplx mean_ut = (c / vol) * flux(st);
    if (k > 0) mean_u += 0.5 * (st.t - t_prev) * (mean_ut_prev + mean_ut);
    ScalarBulkField u = detail::pinned_potential_of(st.r_t);
    u += ScalarBulkField::constant(sp, mean_u);
    ScalarBulkField ut = cplx(c) * divergence(st.r);
    out.push_time(st.t);
    out.potential.emplace_back(std::move(u), st.v, std::move(ut), st.v_t, st.t);
    mean_ut_prev = mean_ut;
    t_prev = st.t;
  }
  return out;
}

/// Constrained potential -> displacement: per state solve
/// div r = -(rho0/B) u_t, curl r = 0, traces (0, -v); r_t = -grad u.
inline Trajectory potential_to_lagrangian(const Trajectory& traj, const Coefficients& coeffs,
                                          double tol = 1e-9) {
  if (traj.potential.empty())
    throw std::invalid_argument("transfer: a potential trajectory is required");
  const SpacePtr& sp = traj.space();
  Trajectory out;
  out.tag = ModelTag::L0;
  out.diag = traj.diag;
  for (const auto& st : traj.potential) {
    cplx c12 = coeffs.rho0 * integrate_volume(st.u_t) -
               coeffs.bulk_modulus * integrate_surface(st.v);
    double scale = coeffs.rho0 * st.u_t.l2_norm() * std::sqrt(sp->geometry.volume()) +
                   coeffs.bulk_modulus * st.v.l2_norm() * std::sqrt(sp->geometry.area_gamma1());
    if (std::abs(c12) > tol * std::max(scale, 1e-300))
      throw CompatibilityError(
          "transfer: potential state violates the integral constraint, no trace-matched "
          "preimage exists");
    ScalarBulkField w = cplx(-coeffs.rho0 / coeffs.bulk_modulus) * st.u_t;
    VectorField r = solve_div_curl_balanced(w, SurfaceField::zero(sp), st.v,
                                            ToroidalField::zero(sp), std::max(scale, 1.0));
    VectorField rt = VectorField::gradient(cplx(-1.0) * st.u);
    out.push_time(st.t);
    out.lagrangian.emplace_back(std::move(r), st.v, std::move(rt), st.v_t, st.t);
  }
  return out;
}

/// Potential -> pressure/velocity: (p, vvec, v) = (rho0 u_t, -grad u, v).
inline Trajectory potential_to_eulerian(const Trajectory& traj, const Coefficients& coeffs) {
  if (traj.potential.empty())
    throw std::invalid_argument("transfer: a potential trajectory is required");
  Trajectory out;
  out.tag = ModelTag::Eulerian;
  out.diag = traj.diag;
  for (const auto& st : traj.potential) {
    out.push_time(st.t);
    out.eulerian.emplace_back(cplx(coeffs.rho0) * st.u_t,
                              VectorField::gradient(cplx(-1.0) * st.u), st.v, st.v_t, st.t);
  }
  return out;
}

/// Per-state residual of the integral constraint of the constrained
/// pressure/velocity class (int p = B int v) or the constrained potential
/// class (rho0 int u_t = B int v).
inline std::vector<double> constraint_residuals(const Trajectory& traj,
                                                const Coefficients& coeffs) {
  std::vector<double> out;
  if (!traj.eulerian.empty()) {
    for (const auto& st : traj.eulerian)
      out.push_back(std::abs(integrate_volume(st.p) -
                             coeffs.bulk_modulus * integrate_surface(st.v)));
  } else if (!traj.potential.empty()) {
    for (const auto& st : traj.potential)
      out.push_back(std::abs(coeffs.rho0 * integrate_volume(st.u_t) -
                             coeffs.bulk_modulus * integrate_surface(st.v)));
  } else {
    throw std::invalid_argument(
        "constraint residuals are defined for pressure/velocity or potential trajectories");
  }
  return out;
}

/// Decision report for equality modulo stationary solutions: the
/// difference trajectory must be constant in time and its value must be an
/// equilibrium of the model kind.
struct StationaryDifferenceReport {
  double time_variation = 0.0;      // max_t || d(t) - d(0) ||
  double equilibrium_residual = 0.0;  // residual of d(0) as an equilibrium
  double velocity_norm = 0.0;       // velocities of a stationary difference vanish
  bool equivalent = false;
};

inline StationaryDifferenceReport stationary_difference(const Trajectory& a, const Trajectory& b,
                                                        const Coefficients& coeffs,
                                                        double tol = 1e-8) {
  if (a.tag != b.tag || a.size() != b.size())
    throw std::invalid_argument("stationary difference: same model tag and time grid required");
  for (std::size_t k = 0; k < a.size(); ++k)
    if (std::abs(a.times[k] - b.times[k]) > 1e-12 * (1.0 + std::abs(a.times[k])))
      throw std::invalid_argument("stationary difference: time grids do not match");

  StationaryDifferenceReport rep;
  double scale = 1e-300;
  if (!a.lagrangian.empty()) {
    ConfigurationPair d0 = a.lagrangian[0].configuration() - b.lagrangian[0].configuration();
    for (std::size_t k = 0; k < a.size(); ++k) {
      ConfigurationPair dk = a.lagrangian[k].configuration() - b.lagrangian[k].configuration();
      rep.time_variation = std::max(rep.time_variation, pair_norm(dk - d0));
      rep.velocity_norm = std::max(
          rep.velocity_norm, (a.lagrangian[k].r_t - b.lagrangian[k].r_t).l2_norm() +
                                 (a.lagrangian[k].v_t - b.lagrangian[k].v_t).l2_norm());
      scale = std::max(scale, pair_norm(a.lagrangian[k].configuration()) +
                                  a.lagrangian[k].r_t.l2_norm());
    }
    rep.equilibrium_residual = equilibrium_residual(d0, coeffs).residual;
  } else if (!a.potential.empty()) {
    // stationary potential solutions are spatially constant u with v in
    // the membrane kernel; compare mod that class
    auto dev = [&](const PotentialState& x, const PotentialState& y) {
      ScalarBulkField du = x.u - y.u;
      du -= ScalarBulkField::constant(du.space, integrate_volume(du) / du.space->geometry.volume());
      return du;
    };
    ScalarBulkField du0 = dev(a.potential[0], b.potential[0]);
    SurfaceField dv0 = a.potential[0].v - b.potential[0].v;
    for (std::size_t k = 0; k < a.size(); ++k) {
      ScalarBulkField duk = dev(a.potential[k], b.potential[k]);
      SurfaceField dvk = a.potential[k].v - b.potential[k].v;
      rep.time_variation =
          std::max(rep.time_variation, (duk - du0).l2_norm() + (dvk - dv0).l2_norm());
      rep.velocity_norm = std::max(
          rep.velocity_norm, (a.potential[k].u_t - b.potential[k].u_t).l2_norm() +
                                 (a.potential[k].v_t - b.potential[k].v_t).l2_norm());
      scale = std::max(scale, a.potential[k].u.l2_norm() + a.potential[k].u_t.l2_norm() + 1.0);
    }
    // d0 must be a stationary potential state: grad u = 0 and kernel v
    MembraneOperator op = assemble_membrane(coeffs.sigma, coeffs.kappa, coeffs.space());
    rep.equilibrium_residual =
        VectorField::gradient(du0).l2_norm() + op.apply_strong(dv0).l2_norm();
  } else if (!a.eulerian.empty()) {
    MembraneOperator op = assemble_membrane(coeffs.sigma, coeffs.kappa, coeffs.space());
    ScalarBulkField dp0 = a.eulerian[0].p - b.eulerian[0].p;
    SurfaceField dv0 = a.eulerian[0].v - b.eulerian[0].v;
    for (std::size_t k = 0; k < a.size(); ++k) {
      ScalarBulkField dpk = a.eulerian[k].p - b.eulerian[k].p;
      SurfaceField dvk = a.eulerian[k].v - b.eulerian[k].v;
      rep.time_variation =
          std::max(rep.time_variation, (dpk - dp0).l2_norm() + (dvk - dv0).l2_norm());
      rep.velocity_norm =
          std::max(rep.velocity_norm, (a.eulerian[k].vvec - b.eulerian[k].vvec).l2_norm() +
                                          (a.eulerian[k].v_t - b.eulerian[k].v_t).l2_norm());
      scale = std::max(scale, a.eulerian[k].p.l2_norm() + a.eulerian[k].vvec.l2_norm() + 1.0);
    }
    // stationary pressure/velocity states: p spatially constant,
    // membrane equation -Div_G(sigma grad v) + kappa v + p = 0
    cplx p0 = integrate_volume(dp0) / coeffs.space()->geometry.volume();
    rep.equilibrium_residual =
        (dp0 - ScalarBulkField::constant(dp0.space, p0)).l2_norm() +
        (op.apply_strong(dv0) + p0 * SurfaceField::one(coeffs.space())).l2_norm();
  } else {
    throw std::invalid_argument("stationary difference: empty trajectories");
  }
  rep.equivalent = rep.time_variation <= tol * scale &&
                   rep.equilibrium_residual <= tol * scale && rep.velocity_norm <= tol * scale;
  return rep;
}

/// Split of a pressure/velocity trajectory into its constrained part and
/// the multiple of the special stationary solution.
struct EulerianSplit {
  Trajectory constrained;
  std::vector<cplx> alpha;  // per-state coefficient of (q*, 0, z*)
};

inline EulerianSplit eulerian_split(const Trajectory& traj, const Coefficients& coeffs,
                                    const SpecialEquilibrium& eq) {
  if (traj.eulerian.empty())
    throw std::invalid_argument("split: a pressure/velocity trajectory is required");
  const SpacePtr& sp = traj.space();
  const double B = coeffs.bulk_modulus;
  // the special stationary state in pressure/velocity variables
  ScalarBulkField q_star = cplx(-B) * divergence(eq.s_bullet);
  SurfaceField z_star = eq.z_bullet;
  cplx L_star = integrate_volume(q_star) - B * integrate_surface(z_star);  // = B L(s*, z*)
  EulerianSplit out;
  out.constrained.tag = ModelTag::Eulerian;
  for (const auto& st : traj.eulerian) {
    cplx L = integrate_volume(st.p) - B * integrate_surface(st.v);
    cplx alpha = L / L_star;
    out.alpha.push_back(alpha);
    out.constrained.push_time(st.t);
    out.constrained.eulerian.emplace_back(st.p - alpha * q_star, st.vvec, st.v - alpha * z_star,
                                          st.v_t, st.t);
  }
  return out;
}

}  // namespace acousto
