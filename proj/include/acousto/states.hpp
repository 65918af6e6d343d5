#pragma once

#include <optional>
#include <vector>

#include "acousto/equilibria.hpp"
#include "acousto/model_tags.hpp"

namespace acousto {

/// State of the scalar-potential description: (u, v) and their velocities.
struct PotentialState {
  ScalarBulkField u;
  SurfaceField v;
  ScalarBulkField u_t;
  SurfaceField v_t;
  double t = 0.0;

  PotentialState() = default;
  PotentialState(ScalarBulkField u_, SurfaceField v_, ScalarBulkField ut_, SurfaceField vt_,
                 double t_ = 0.0)
      : u(std::move(u_)), v(std::move(v_)), u_t(std::move(ut_)), v_t(std::move(vt_)), t(t_) {
    require_same_space(u.space, v.space, "potential state");
    require_same_space(u.space, u_t.space, "potential state");
    require_same_space(u.space, v_t.space, "potential state");
  }
  static PotentialState zero(const SpacePtr& sp) {
    return PotentialState(ScalarBulkField::zero(sp), SurfaceField::zero(sp),
                          ScalarBulkField::zero(sp), SurfaceField::zero(sp));
  }
  const SpacePtr& space() const { return u.space; }
};

/// State of the displacement description.  The velocity field is curl-free
/// by the phase-space definition, so its toroidal part must vanish.
struct LagrangianState {
  VectorField r;
  SurfaceField v;
  VectorField r_t;
  SurfaceField v_t;
  double t = 0.0;

  LagrangianState() = default;
  LagrangianState(VectorField r_, SurfaceField v_, VectorField rt_, SurfaceField vt_,
                  double t_ = 0.0)
      : r(std::move(r_)), v(std::move(v_)), r_t(std::move(rt_)), v_t(std::move(vt_)), t(t_) {
    require_same_space(r.space(), v.space, "lagrangian state");
    require_same_space(r.space(), r_t.space(), "lagrangian state");
    require_same_space(r.space(), v_t.space, "lagrangian state");
    if (r_t.toroidal.l2_norm() != 0.0)
      throw std::invalid_argument("lagrangian state: the velocity field must be curl-free");
  }
  static LagrangianState zero(const SpacePtr& sp) {
    return LagrangianState(VectorField::zero(sp), SurfaceField::zero(sp), VectorField::zero(sp),
                           SurfaceField::zero(sp));
  }
  const SpacePtr& space() const { return v.space; }
  ConfigurationPair configuration() const { return ConfigurationPair(r, v); }
};

/// State of the pressure/velocity description; the velocity field is
/// curl-free by representation.
struct EulerianState {
  ScalarBulkField p;
  VectorField vvec;
  SurfaceField v;
  SurfaceField v_t;
  double t = 0.0;

  EulerianState() = default;
  EulerianState(ScalarBulkField p_, VectorField vv_, SurfaceField v_, SurfaceField vt_,
                double t_ = 0.0)
      : p(std::move(p_)), vvec(std::move(vv_)), v(std::move(v_)), v_t(std::move(vt_)), t(t_) {
    require_same_space(p.space, vvec.space(), "eulerian state");
    require_same_space(p.space, v.space, "eulerian state");
    require_same_space(p.space, v_t.space, "eulerian state");
    if (vvec.toroidal.l2_norm() != 0.0)
      throw std::invalid_argument("eulerian state: the velocity field must be curl-free");
  }
  static EulerianState zero(const SpacePtr& sp) {
    return EulerianState(ScalarBulkField::zero(sp), VectorField::zero(sp), SurfaceField::zero(sp),
                         SurfaceField::zero(sp));
  }
  const SpacePtr& space() const { return p.space; }
};

/// Per-output diagnostics recorded along a run.
struct TrajectoryDiagnostics {
  std::vector<double> energy;
  std::vector<double> dissipation_cum;
  std::vector<cplx> L_value;
  std::vector<cplx> ell_value;
  std::vector<double> constraint_residual;
  std::vector<double> dist_to_equilibrium;
  double weak_residual_last = 0.0;
};

/// A time-stamped sequence of states of one model, with aligned
/// diagnostics.  Only the state vector matching the tag kind is populated.
struct Trajectory {
  ModelTag tag = ModelTag::Potential;
  std::vector<double> times;
  std::vector<LagrangianState> lagrangian;
  std::vector<EulerianState> eulerian;
  std::vector<PotentialState> potential;
  TrajectoryDiagnostics diag;

  std::size_t size() const { return times.size(); }
  void push_time(double t) {
    if (!times.empty() && t <= times.back())
      throw std::invalid_argument("trajectory: timestamps must strictly increase");
    times.push_back(t);
  }
  const SpacePtr& space() const {
    if (!lagrangian.empty()) return lagrangian.front().space();
    if (!eulerian.empty()) return eulerian.front().space();
    if (!potential.empty()) return potential.front().space();
    throw std::logic_error("trajectory: empty");
  }
};

}  // namespace acousto
