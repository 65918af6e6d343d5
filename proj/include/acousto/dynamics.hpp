#pragma once

#include <cmath>

#include "acousto/coefficients.hpp"
#include "acousto/elliptic.hpp"
#include "acousto/equilibria.hpp"
#include "acousto/membrane.hpp"
#include "acousto/states.hpp"

namespace acousto {

/// Surface Galerkin forms of the boundary coefficients (unit-sphere grams;
/// the Gamma1 measure factor b^2 is applied where each form is used).
struct SurfaceForms {
  Eigen::MatrixXd gram_mu, gram_delta, gram_kappa, stiff_sigma;

  static SurfaceForms build(const Coefficients& coeffs) {
    const auto& rule = coeffs.space()->surface;
    SurfaceForms f;
    f.gram_mu = surface_gram(rule, nodal_values(rule, coeffs.mu));
    f.gram_delta = surface_gram(rule, nodal_values(rule, coeffs.delta));
    f.gram_kappa = surface_gram(rule, nodal_values(rule, coeffs.kappa));
    f.stiff_sigma = surface_stiffness(rule, nodal_values(rule, coeffs.sigma));
    return f;
  }
};

inline double quad_form(const Eigen::MatrixXd& M, const Eigen::VectorXcd& x) {
  return x.real().dot(M * x.real()) + x.imag().dot(M * x.imag());
}

/// Energy of a potential-description state: the displacement energy
/// rewritten through rho0 u_t = -B div r, r_t = -grad u.
inline double energy(const Coefficients& coeffs, const PotentialState& st,
                     const SurfaceForms& forms) {
  const auto& sp = *st.space();
  double b2 = sp.geometry.outer_radius * sp.geometry.outer_radius;
  double grad = VectorField::gradient(st.u).l2_norm();
  double ut = st.u_t.l2_norm();
  double bulk = coeffs.rho0 * grad * grad +
                coeffs.rho0 * coeffs.rho0 / coeffs.bulk_modulus * ut * ut;
  double surf = quad_form(forms.stiff_sigma, st.v.coeffs) +
                b2 * quad_form(forms.gram_kappa, st.v.coeffs) +
                b2 * quad_form(forms.gram_mu, st.v_t.coeffs);
  return 0.5 * (bulk + surf);
}

/// Energy of a displacement state (the quadrature of the energy density).
inline double energy(const Coefficients& coeffs, const LagrangianState& st,
                     const SurfaceForms& forms) {
  const auto& sp = *st.space();
  double b2 = sp.geometry.outer_radius * sp.geometry.outer_radius;
  double rt = st.r_t.l2_norm();
  double divr = divergence(st.r).l2_norm();
  double bulk = coeffs.rho0 * rt * rt + coeffs.bulk_modulus * divr * divr;
  double surf = quad_form(forms.stiff_sigma, st.v.coeffs) +
                b2 * quad_form(forms.gram_kappa, st.v.coeffs) +
                b2 * quad_form(forms.gram_mu, st.v_t.coeffs);
  return 0.5 * (bulk + surf);
}

inline double energy(const Coefficients& coeffs, const LagrangianState& st) {
  return energy(coeffs, st, SurfaceForms::build(coeffs));
}
inline double energy(const Coefficients& coeffs, const PotentialState& st) {
  return energy(coeffs, st, SurfaceForms::build(coeffs));
}

/// Semi-discrete evolution of the potential description by the implicit
/// midpoint rule.  The bulk blocks stay diagonal over (l,m); the membrane
/// rows couple modes only through the boundary coefficient grams, and each
/// step eliminates the bulk unknowns mode-by-mode onto a dense boundary
/// Schur complement.  With delta = 0 the scheme conserves the discrete
/// energy exactly; with damping it obeys the discrete energy identity
///   E(t_{n+1}) - E(t_n) = -dt * <delta vbar_t, vbar_t>_{Gamma1}
/// with vbar_t the midpoint velocity, up to linear-solver roundoff.
class PotentialEngine {
 public:
  PotentialEngine(const Coefficients& coeffs, double dt)
      : coeffs_(coeffs), sp_(coeffs.space()), dt_(dt), forms_(SurfaceForms::build(coeffs)) {
    if (!(dt > 0)) throw std::invalid_argument("time stepping: dt must be positive");
    const auto& sp = *sp_;
    const int N = sp.n_r;
    const double rho0 = coeffs_.rho0, B = coeffs_.bulk_modulus;
    const double b2 = sp.geometry.outer_radius * sp.geometry.outer_radius;

    mass_ = sp.radial_weights;
    stiff_.resize(sp.l_max + 1);
    step_lu_.resize(sp.l_max + 1);
    sinv_c_.resize(sp.l_max + 1);
    schur_scalar_.resize(sp.l_max + 1);
    Eigen::MatrixXd wD = sp.radial_weights.asDiagonal() * sp.D;
    for (int l = 0; l <= sp.l_max; ++l) {
      Eigen::MatrixXd K = sp.D.transpose() * wD;
      K += (l * (l + 1.0)) * Eigen::MatrixXd(sp.gl_weights.asDiagonal());
      stiff_[l] = K;
      Eigen::MatrixXd S = (dt_ * dt_ / 2.0) * rho0 * K;
      S += (2.0 * rho0 * rho0 / B) * Eigen::MatrixXd(mass_.asDiagonal());
      step_lu_[l].compute(S);
      sinv_c_[l] = step_lu_[l].solve(sp.eval_b);
      schur_scalar_[l] = sp.eval_b.dot(sinv_c_[l]);
    }
    Eigen::MatrixXd schur = 2.0 * b2 * forms_.gram_mu + dt_ * b2 * forms_.gram_delta +
                            (dt_ * dt_ / 2.0) * (forms_.stiff_sigma + b2 * forms_.gram_kappa);
    double cpl = dt_ * rho0 * b2;
    for (int i = 0; i < sp.n_modes; ++i) schur(i, i) += cpl * cpl * schur_scalar_[sp.mode_l[i]];
    schur_lu_.compute(schur);

    u_.setZero(sp.n_modes, N);
    ut_.setZero(sp.n_modes, N);
    v_.setZero(sp.n_modes);
    vt_.setZero(sp.n_modes);
  }

  void set_state(const PotentialState& st) {
    require_same_space(sp_, st.space(), "engine state");
    u_ = st.u.data;
    ut_ = st.u_t.data;
    v_ = st.v.coeffs;
    vt_ = st.v_t.coeffs;
    t_ = st.t;
    dissipation_cum_ = 0.0;
  }

  PotentialState state() const {
    PotentialState st(ScalarBulkField(sp_), SurfaceField(sp_, v_), ScalarBulkField(sp_),
                      SurfaceField(sp_, vt_), t_);
    st.u.data = u_;
    st.u_t.data = ut_;
    return st;
  }

  double time() const { return t_; }
  double dt() const { return dt_; }
  double dissipation_cum() const { return dissipation_cum_; }

  double energy_now() const { return energy(coeffs_, state(), forms_); }

  /// One implicit midpoint step.
  void step() {
    const auto& sp = *sp_;
    const double rho0 = coeffs_.rho0, B = coeffs_.bulk_modulus;
    const double b2 = sp.geometry.outer_radius * sp.geometry.outer_radius;
    const double cpl = dt_ * rho0 * b2;

    // bulk right-hand sides and partial solves, mode by mode
    Eigen::MatrixXcd u_bar_t(sp.n_modes, sp.n_r);
    Eigen::VectorXcd rv(sp.n_modes);
    {
      Eigen::VectorXcd rhs_v = 2.0 * b2 * mul_rc(forms_.gram_mu, vt_) -
                               dt_ * (mul_rc(forms_.stiff_sigma, v_) +
                                      b2 * mul_rc(forms_.gram_kappa, v_));
      for (int i = 0; i < sp.n_modes; ++i) {
        int l = sp.mode_l[i];
        Eigen::VectorXcd rhs_u =
            (2.0 * rho0 * rho0 / B) * cwise_rc(mass_, ut_.row(i).transpose().eval()) -
            dt_ * rho0 * mul_rc(stiff_[l], u_.row(i).transpose().eval());
        Eigen::VectorXcd tilde(sp.n_r);
        tilde.real() = step_lu_[l].solve(rhs_u.real().eval());
        tilde.imag() = step_lu_[l].solve(rhs_u.imag().eval());
        u_bar_t.row(i) = tilde.transpose();
        rv[i] = rhs_v[i] - cpl * dot_rc(sp.eval_b, tilde);
      }
    }
    Eigen::VectorXcd v_bar_t(sp.n_modes);
    v_bar_t.real() = schur_lu_.solve(rv.real().eval());
    v_bar_t.imag() = schur_lu_.solve(rv.imag().eval());
    for (int i = 0; i < sp.n_modes; ++i)
      u_bar_t.row(i) += (cpl * v_bar_t[i]) * sinv_c_[sp.mode_l[i]].transpose().cast<cplx>();

    // dissipation of this step, evaluated at the midpoint velocity
    dissipation_cum_ += dt_ * b2 * quad_form(forms_.gram_delta, v_bar_t);

    u_ += dt_ * u_bar_t;
    v_ += dt_ * v_bar_t;
    ut_ = 2.0 * u_bar_t - ut_;
    vt_ = 2.0 * v_bar_t - vt_;
    t_ += dt_;
  }

 private:
  Coefficients coeffs_;
  SpacePtr sp_;
  double dt_ = 0.0;
  SurfaceForms forms_;

  Eigen::VectorXd mass_;
  std::vector<Eigen::MatrixXd> stiff_;
  std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> step_lu_;
  std::vector<Eigen::VectorXd> sinv_c_;
  std::vector<double> schur_scalar_;
  Eigen::PartialPivLU<Eigen::MatrixXd> schur_lu_;

  Eigen::MatrixXcd u_, ut_;
  Eigen::VectorXcd v_, vt_;
  double t_ = 0.0;
  double dissipation_cum_ = 0.0;
};

/// Dense first-order generator block of one (l, m) column for constant
/// coefficients: state (u, v, u_t, v_t), d/dt x = A x.
inline Eigen::MatrixXd generator_block(const Coefficients& coeffs, int l) {
  const auto& sp = *coeffs.space();
  for (const SurfaceField* f : {&coeffs.mu, &coeffs.sigma, &coeffs.delta, &coeffs.kappa})
    if (sp.n_modes > 1 && f->coeffs.tail(sp.n_modes - 1).cwiseAbs().maxCoeff() != 0.0)
      throw std::invalid_argument("generator block: constant coefficients required");
  const double s4pi = std::sqrt(4.0 * M_PI);
  double mu0 = std::real(coeffs.mu.coeffs[0]) / s4pi;
  double sigma0 = std::real(coeffs.sigma.coeffs[0]) / s4pi;
  double delta0 = std::real(coeffs.delta.coeffs[0]) / s4pi;
  double kappa0 = std::real(coeffs.kappa.coeffs[0]) / s4pi;
  const double rho0 = coeffs.rho0, B = coeffs.bulk_modulus;
  const double b2 = sp.geometry.outer_radius * sp.geometry.outer_radius;
  const int N = sp.n_r, n = N + 1;

  Eigen::MatrixXd K = sp.D.transpose() * sp.radial_weights.asDiagonal() * sp.D;
  K += (l * (l + 1.0)) * Eigen::MatrixXd(sp.gl_weights.asDiagonal());

  Eigen::MatrixXd Kq = Eigen::MatrixXd::Zero(n, n);
  Kq.topLeftCorner(N, N) = rho0 * K;
  Kq(N, N) = sigma0 * l * (l + 1.0) + kappa0 * b2;
  Eigen::VectorXd minv(n);
  minv.head(N) = (B / (rho0 * rho0)) * sp.radial_weights.cwiseInverse();
  minv(N) = 1.0 / (b2 * mu0);
  Eigen::MatrixXd GD = Eigen::MatrixXd::Zero(n, n);
  GD.block(0, N, N, 1) = -rho0 * b2 * sp.eval_b;
  GD.block(N, 0, 1, N) = rho0 * b2 * sp.eval_b.transpose();
  GD(N, N) = b2 * delta0;

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  A.topRightCorner(n, n).setIdentity();
  A.bottomLeftCorner(n, n) = -(minv.asDiagonal() * Kq);
  A.bottomRightCorner(n, n) = -(minv.asDiagonal() * GD);
  return A;
}

/// Energy Gram matrix matching generator_block: E(x) = x^T En x / 2.
inline Eigen::MatrixXd generator_energy_block(const Coefficients& coeffs, int l) {
  const auto& sp = *coeffs.space();
  const double s4pi = std::sqrt(4.0 * M_PI);
  double mu0 = std::real(coeffs.mu.coeffs[0]) / s4pi;
  double sigma0 = std::real(coeffs.sigma.coeffs[0]) / s4pi;
  double kappa0 = std::real(coeffs.kappa.coeffs[0]) / s4pi;
  const double rho0 = coeffs.rho0, B = coeffs.bulk_modulus;
  const double b2 = sp.geometry.outer_radius * sp.geometry.outer_radius;
  const int N = sp.n_r, n = N + 1;
  Eigen::MatrixXd K = sp.D.transpose() * sp.radial_weights.asDiagonal() * sp.D;
  K += (l * (l + 1.0)) * Eigen::MatrixXd(sp.gl_weights.asDiagonal());
  Eigen::MatrixXd En = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  En.topLeftCorner(N, N) = rho0 * K;
  En(N, N) = sigma0 * l * (l + 1.0) + kappa0 * b2;
  En.block(n, n, N, N) =
      (rho0 * rho0 / B) * Eigen::MatrixXd(sp.radial_weights.asDiagonal());
  En(n + N, n + N) = b2 * mu0;
  return En;
}

struct SimulateOptions {
  double dt = 0.0;  // 0: use the default 1e-3 * b / sqrt(B/rho0)
  double t_end = 1.0;
  int output_every = 10;
  double membership_tol = 1e-9;
};

inline double default_dt(const Coefficients& coeffs) {
  const auto& g = coeffs.space()->geometry;
  return 1e-3 * g.outer_radius / std::sqrt(coeffs.bulk_modulus / coeffs.rho0);
}

namespace detail {

struct EngineRun {
  PotentialEngine engine;
  std::vector<double> out_times;
  std::vector<PotentialState> out_states;
  std::vector<double> out_dissipation;

  EngineRun(const Coefficients& coeffs, const PotentialState& init, const SimulateOptions& opt)
      : engine(coeffs, opt.dt > 0 ? opt.dt : default_dt(coeffs)) {
    engine.set_state(init);
    const double dt = engine.dt();
    long n_steps = std::lround(opt.t_end / dt);
    if (n_steps < 1) n_steps = 1;
    int every = std::max(1, opt.output_every);
    record();
    for (long k = 1; k <= n_steps; ++k) {
      engine.step();
      if (k % every == 0 || k == n_steps) record();
    }
  }

  void record() {
    out_times.push_back(engine.time());
    out_states.push_back(engine.state());
    out_dissipation.push_back(engine.dissipation_cum());
  }
};

inline ScalarBulkField pinned_potential_of(const VectorField& minus_grad) {
  // u with grad u = -field; the stored potential is exactly that up to the
  // gauge constant, which is pinned to zero volume mean.
  ScalarBulkField u = minus_grad.potential;
  u *= cplx(-1.0);
  cplx mean = integrate_volume(u) / u.space->geometry.volume();
  u -= ScalarBulkField::constant(u.space, mean);
  return u;
}

}  // namespace detail

/// Evolve a displacement model: the dynamic core is split off by the
/// structural projector, propagated through the potential description, and
/// reconstructed as the curl-free flux solution at every output time; the
/// equilibrium component rides along unchanged.
inline Trajectory simulate(ModelTag tag, const LagrangianState& init, const Coefficients& coeffs,
                           const SimulateOptions& opt = {}) {
  if (!is_lagrangian(tag)) throw std::invalid_argument("simulate: lagrangian initial data need a displacement model tag");
  const SpacePtr& sp = coeffs.space();
  require_same_space(sp, init.space(), "simulate");

  MembraneOperator op = assemble_membrane(coeffs.sigma, coeffs.kappa, sp);
  SpecialEquilibrium eq = special_equilibrium(coeffs, op);

  MembershipReport rep = membership(init.configuration(), opt.membership_tol);
  if (tag != ModelTag::L && !rep.in(tag))
    throw std::invalid_argument("simulate: initial data are not in the configuration space of model " +
                                to_string(tag));

  StructuralDecomposition split = project_structural(init.configuration(), eq);
  const double rho0 = coeffs.rho0, B = coeffs.bulk_modulus;

  PotentialState pinit(detail::pinned_potential_of(init.r_t),
                       split.onto_L0.z,
                       cplx(-B / rho0) * divergence(split.onto_L0.s),
                       init.v_t, init.t);
  detail::EngineRun run(coeffs, pinit, opt);

  SurfaceForms forms = SurfaceForms::build(coeffs);
  double guard = pair_norm(init.configuration()) + init.r_t.l2_norm() + init.v_t.l2_norm() + 1.0;

  // Static energy of the equilibrium component.  The discrete energy of
  // the run is the engine energy plus this constant: the cross terms
  // cancel exactly because the dynamic part keeps rho0 int u_t = B int v
  // and the equilibrium satisfies its weak membrane equation.
  double e_equilibrium;
  {
    double b2 = sp->geometry.outer_radius * sp->geometry.outer_radius;
    double dv = divergence(split.onto_E.s).l2_norm();
    e_equilibrium = 0.5 * (coeffs.bulk_modulus * dv * dv +
                           quad_form(forms.stiff_sigma, split.onto_E.z.coeffs) +
                           b2 * quad_form(forms.gram_kappa, split.onto_E.z.coeffs));
  }

  // conserved reference values of the initial data
  ToroidalField tor0 = init.r.toroidal;
  SurfaceField g0_ref = sp->geometry.has_gamma0() ? normal_trace(init.r, BoundaryPart::Gamma0)
                                                  : SurfaceField::zero(sp);
  SurfaceField g1_ref = normal_trace(init.r, BoundaryPart::Gamma1) + init.v;
  cplx L_ref = constraint_L(init.configuration());

  Trajectory traj;
  traj.tag = tag;
  for (std::size_t k = 0; k < run.out_states.size(); ++k) {
    const PotentialState& ps = run.out_states[k];
    ScalarBulkField w = cplx(-rho0 / B) * ps.u_t;
    VectorField r0t = solve_div_curl_balanced(w, SurfaceField::zero(sp), ps.v,
                                              ToroidalField::zero(sp), guard);
    VectorField r = r0t + split.onto_E.s;
    SurfaceField v = ps.v + split.onto_E.z;
    VectorField rt = VectorField::gradient(cplx(-1.0) * ps.u);
    LagrangianState st(std::move(r), std::move(v), std::move(rt), ps.v_t, ps.t);

    traj.push_time(ps.t);
    traj.diag.energy.push_back(energy(coeffs, ps, forms) + e_equilibrium);
    traj.diag.dissipation_cum.push_back(run.out_dissipation[k]);
    cplx L = constraint_L(st.configuration());
    traj.diag.L_value.push_back(L);
    traj.diag.ell_value.push_back(L / eq.L_value);
    double drift = (st.r.toroidal - tor0).l2_norm();
    if (sp->geometry.has_gamma0())
      drift = std::max(drift, (normal_trace(st.r, BoundaryPart::Gamma0) - g0_ref).l2_norm());
    drift = std::max(drift,
                     (normal_trace(st.r, BoundaryPart::Gamma1) + st.v - g1_ref).l2_norm());
    drift = std::max(drift, std::abs(L - L_ref));
    traj.diag.constraint_residual.push_back(drift);
    double de = pair_norm(st.configuration() - split.onto_E);
    double dv = st.r_t.l2_norm(), dvt = st.v_t.l2_norm();
    traj.diag.dist_to_equilibrium.push_back(std::sqrt(de * de + dv * dv + dvt * dvt));
    traj.lagrangian.push_back(std::move(st));
  }
  return traj;
}

/// Evolve the pressure/velocity description (through the potential engine,
/// emitting pressure/velocity states).
inline Trajectory simulate(const EulerianState& init, const Coefficients& coeffs,
                           const SimulateOptions& opt = {}) {
  const SpacePtr& sp = coeffs.space();
  require_same_space(sp, init.space(), "simulate");
  const double rho0 = coeffs.rho0, B = coeffs.bulk_modulus;

  PotentialState pinit(detail::pinned_potential_of(init.vvec), init.v,
                       cplx(1.0 / rho0) * init.p, init.v_t, init.t);
  detail::EngineRun run(coeffs, pinit, opt);
  SurfaceForms forms = SurfaceForms::build(coeffs);

  Trajectory traj;
  traj.tag = ModelTag::Eulerian;
  for (std::size_t k = 0; k < run.out_states.size(); ++k) {
    const PotentialState& ps = run.out_states[k];
    EulerianState st(cplx(rho0) * ps.u_t, VectorField::gradient(cplx(-1.0) * ps.u), ps.v, ps.v_t,
                     ps.t);
    traj.push_time(ps.t);
    traj.diag.energy.push_back(energy(coeffs, ps, forms));
    traj.diag.dissipation_cum.push_back(run.out_dissipation[k]);
    cplx Leul = integrate_volume(st.p) - B * integrate_surface(st.v);
    traj.diag.L_value.push_back(Leul);
    traj.diag.ell_value.push_back(0.0);
    traj.diag.constraint_residual.push_back(std::abs(Leul));
    traj.diag.dist_to_equilibrium.push_back(0.0);
    traj.eulerian.push_back(std::move(st));
  }
  return traj;
}

/// Evolve the potential description directly.
inline Trajectory simulate(const PotentialState& init, const Coefficients& coeffs,
                           const SimulateOptions& opt = {}) {
  const SpacePtr& sp = coeffs.space();
  require_same_space(sp, init.space(), "simulate");
  detail::EngineRun run(coeffs, init, opt);
  SurfaceForms forms = SurfaceForms::build(coeffs);

  Trajectory traj;
  traj.tag = ModelTag::Potential;
  for (std::size_t k = 0; k < run.out_states.size(); ++k) {
    const PotentialState& ps = run.out_states[k];
    traj.push_time(ps.t);
    traj.diag.energy.push_back(energy(coeffs, ps, forms));
    traj.diag.dissipation_cum.push_back(run.out_dissipation[k]);
    cplx c12 = coeffs.rho0 * integrate_volume(ps.u_t) -
               coeffs.bulk_modulus * integrate_surface(ps.v);
    traj.diag.L_value.push_back(c12);
    traj.diag.ell_value.push_back(0.0);
    traj.diag.constraint_residual.push_back(std::abs(c12));
    traj.diag.dist_to_equilibrium.push_back(0.0);
    traj.potential.push_back(ps);
  }
  return traj;
}

/// Drift of the four conserved quantities along a displacement trajectory.
struct ConservedDrift {
  double curl = 0.0;
  double gamma0_trace = 0.0;
  double gamma1_trace = 0.0;
  double L = 0.0;
  double max() const { return std::max(std::max(curl, gamma0_trace), std::max(gamma1_trace, L)); }
};

inline ConservedDrift conserved_quantities(const Trajectory& traj) {
  if (traj.lagrangian.empty())
    throw std::invalid_argument("conserved quantities are defined for displacement trajectories");
  const auto& init = traj.lagrangian.front();
  const SpacePtr& sp = init.space();
  ToroidalField tor0 = init.r.toroidal;
  SurfaceField g0_ref = sp->geometry.has_gamma0() ? normal_trace(init.r, BoundaryPart::Gamma0)
                                                  : SurfaceField::zero(sp);
  SurfaceField g1_ref = normal_trace(init.r, BoundaryPart::Gamma1) + init.v;
  cplx L_ref = constraint_L(init.configuration());
  ConservedDrift d;
  for (const auto& st : traj.lagrangian) {
    d.curl = std::max(d.curl, (st.r.toroidal - tor0).l2_norm());
    if (sp->geometry.has_gamma0())
      d.gamma0_trace =
          std::max(d.gamma0_trace, (normal_trace(st.r, BoundaryPart::Gamma0) - g0_ref).l2_norm());
    d.gamma1_trace = std::max(
        d.gamma1_trace, (normal_trace(st.r, BoundaryPart::Gamma1) + st.v - g1_ref).l2_norm());
    d.L = std::max(d.L, std::abs(constraint_L(st.configuration()) - L_ref));
  }
  return d;
}

/// Accumulated boundary dissipation between two output times of a run.
inline double dissipation_integral(const Trajectory& traj, double s, double t) {
  auto locate = [&](double x) -> double {
    for (std::size_t k = 0; k < traj.times.size(); ++k)
      if (std::abs(traj.times[k] - x) <= 1e-9 * (1.0 + std::abs(x)))
        return traj.diag.dissipation_cum[k];
    throw std::invalid_argument("dissipation integral: time is not an output time of the run");
  };
  return locate(t) - locate(s);
}

}  // namespace acousto
