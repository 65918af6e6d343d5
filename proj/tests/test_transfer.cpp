#include <gtest/gtest.h>

#include "acousto/transfer.hpp"
#include "acousto/reference.hpp"
#include "acousto/weak_residual.hpp"

using namespace acousto;

namespace {

Coefficients unit_coeffs(const SpacePtr& sp, double delta0, double kappa0) {
  return Coefficients::constants(sp, 1.0, 1.0, 1.0, 1.0, delta0, kappa0);
}

/// Strong-class displacement data in the smallest configuration space.
LagrangianState l0_data(FieldSampler& sampler, const SpacePtr& sp) {
  ConfigurationPair p = sampler.pair_in_L0(sp);
  ConfigurationPair vel = sampler.pair_in_L0(sp);
  return LagrangianState(p.s, p.z, vel.s, vel.z);
}

double lagrangian_distance(const Trajectory& a, const Trajectory& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    d = std::max(d, pair_norm(a.lagrangian[k].configuration() - b.lagrangian[k].configuration()));
    d = std::max(d, (a.lagrangian[k].r_t - b.lagrangian[k].r_t).l2_norm() +
                        (a.lagrangian[k].v_t - b.lagrangian[k].v_t).l2_norm());
  }
  return d;
}

TEST(LagrangianToEulerian, StationaryToroidalMapsToZero) {
  auto sp = make_space(Geometry::ball(1.0), 4, 24);
  Coefficients coeffs = unit_coeffs(sp, 0.0, 1.0);
  FieldSampler sampler(1);
  // constant-in-time toroidal displacement, zero velocity: a stationary
  // solution of the unconstrained models
  Trajectory traj;
  traj.tag = ModelTag::L;
  ToroidalField T = sampler.toroidal(sp);
  for (int k = 0; k <= 10; ++k) {
    traj.push_time(0.01 * k);
    traj.lagrangian.emplace_back(VectorField::from_toroidal(T), SurfaceField::zero(sp),
                                 VectorField::zero(sp), SurfaceField::zero(sp), 0.01 * k);
  }
  Trajectory eul = lagrangian_to_eulerian(traj, coeffs);
  for (const auto& st : eul.eulerian)
    EXPECT_LT(st.p.l2_norm() + st.vvec.l2_norm() + st.v.l2_norm() + st.v_t.l2_norm(), 1e-10);
}

TEST(LagrangianToEulerian, SpecialEquilibriumMapsToItsPressureForm) {
  auto sp = make_space(Geometry::ball(1.0), 4, 24);
  Coefficients coeffs = unit_coeffs(sp, 0.0, 2.0);
  SpecialEquilibrium eq = special_equilibrium(coeffs);
  Trajectory traj;
  traj.tag = ModelTag::L;
  for (int k = 0; k <= 6; ++k) {
    traj.push_time(0.1 * k);
    traj.lagrangian.emplace_back(eq.s_bullet, eq.z_bullet, VectorField::zero(sp),
                                 SurfaceField::zero(sp), 0.1 * k);
  }
  Trajectory eul = lagrangian_to_eulerian(traj, coeffs);
  // q* = -B div s* = B; v = z*
  for (const auto& st : eul.eulerian) {
    EXPECT_LT((st.p - ScalarBulkField::constant(sp, coeffs.bulk_modulus)).l2_norm(), 1e-8);
    EXPECT_LT(st.vvec.l2_norm(), 1e-12);
    EXPECT_LT((st.v - eq.z_bullet).l2_norm(), 1e-12);
  }
}

TEST(LagrangianToEulerian, KernelScalingIdentity) {
  auto sp = make_space(Geometry::shell(0.5, 1.0), 4, 24);
  Coefficients coeffs = unit_coeffs(sp, 0.2, 1.0);
  FieldSampler sampler(3);
  SimulateOptions opt;
  opt.dt = 2e-3;
  opt.t_end = 0.1;
  opt.output_every = 10;
  ConfigurationPair p = sampler.pair(sp, true);
  ConfigurationPair vel = sampler.pair_in_L0(sp);
  Trajectory traj = simulate(ModelTag::L, LagrangianState(p.s, p.z, vel.s, vel.z), coeffs, opt);
  Trajectory eul = lagrangian_to_eulerian(traj, coeffs);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    cplx L_eul = integrate_volume(eul.eulerian[k].p) -
                 coeffs.bulk_modulus * integrate_surface(eul.eulerian[k].v);
    cplx L_lag = constraint_L(traj.lagrangian[k].configuration());
    double scale = std::max(1.0, std::abs(L_lag));
    EXPECT_LT(std::abs(L_eul + coeffs.bulk_modulus * L_lag), 1e-9 * scale);
  }
}

TEST(EulerianToLagrangian, RoundTripOnConstrainedRuns) {
  auto sp = make_space(Geometry::ball(1.0), 3, 24);
  Coefficients coeffs = unit_coeffs(sp, 0.3, 1.0);
  FieldSampler sampler(5);
  SimulateOptions opt;
  opt.dt = 1e-3;
  opt.t_end = 0.05;
  opt.output_every = 1;
  Trajectory run = simulate(ModelTag::L0, l0_data(sampler, sp), coeffs, opt);
  Trajectory eul = lagrangian_to_eulerian(run, coeffs);
  Trajectory back = eulerian_to_lagrangian(eul, coeffs);
  EXPECT_LT(lagrangian_distance(run, back), 1e-8 * (1.0 + pair_norm(run.lagrangian[0].configuration())));
}

TEST(EulerianToLagrangian, ConstantStateOnMatchedGeometry) {
  // |Omega| = area(Gamma1) at b = 3, so (p, v) = (B c, c 1) is constrained
  auto sp = make_space(Geometry::ball(3.0), 3, 24);
  Coefficients coeffs = unit_coeffs(sp, 0.0, 1.0);
  const double c = 0.7;
  Trajectory eul;
  eul.tag = ModelTag::Eulerian;
  for (int k = 0; k <= 6; ++k) {
    eul.push_time(0.1 * k);
    eul.eulerian.emplace_back(ScalarBulkField::constant(sp, coeffs.bulk_modulus * c),
                              VectorField::zero(sp), cplx(c) * SurfaceField::one(sp),
                              SurfaceField::zero(sp), 0.1 * k);
  }
  Trajectory lag = eulerian_to_lagrangian(eul, coeffs);
  MembershipReport rep = membership(lag.lagrangian[0].configuration());
  EXPECT_TRUE(rep.in(ModelTag::L0));
  // a stationary image of a stationary state
  for (std::size_t k = 1; k < lag.size(); ++k)
    EXPECT_LT(pair_norm(lag.lagrangian[k].configuration() - lag.lagrangian[0].configuration()),
              1e-10);
  EXPECT_THROW(
      {
        auto sp2 = make_space(Geometry::ball(1.0), 3, 24);
        Coefficients c2 = unit_coeffs(sp2, 0.0, 1.0);
        Trajectory bad;
        bad.tag = ModelTag::Eulerian;
        bad.push_time(0.0);
        bad.eulerian.emplace_back(ScalarBulkField::constant(sp2, 1.0), VectorField::zero(sp2),
                                  cplx(1.0) * SurfaceField::one(sp2), SurfaceField::zero(sp2), 0.0);
        eulerian_to_lagrangian(bad, c2);
      },
      CompatibilityError);
}

TEST(LagrangianToPotential, StationaryInputGivesConstantPotential) {
  auto sp = make_space(Geometry::ball(1.0), 3, 24);
  Coefficients coeffs = unit_coeffs(sp, 0.0, 1.0);
  FieldSampler sampler(7);
  Trajectory traj;
  traj.tag = ModelTag::L;
  ToroidalField T = sampler.toroidal(sp);
  for (int k = 0; k <= 8; ++k) {
    traj.push_time(0.05 * k);
    traj.lagrangian.emplace_back(VectorField::from_toroidal(T), SurfaceField::zero(sp),
                                 VectorField::zero(sp), SurfaceField::zero(sp), 0.05 * k);
  }
  Trajectory pot = lagrangian_to_potential(traj, coeffs);
  for (const auto& st : pot.potential) {
    EXPECT_LT(VectorField::gradient(st.u).l2_norm(), 1e-12);
    EXPECT_LT(st.u_t.l2_norm() + st.v.l2_norm() + st.v_t.l2_norm(), 1e-10);
  }
}

TEST(LagrangianToPotential, ConstrainedRunSatisfiesTheIntegralCondition) {
  auto sp = make_space(Geometry::shell(0.5, 1.0), 3, 24);
  Coefficients coeffs = unit_coeffs(sp, 0.1, 0.0);
  FieldSampler sampler(9);
  SimulateOptions opt;
  opt.dt = 1e-3;
  opt.t_end = 0.05;
  opt.output_every = 1;
  Trajectory run = simulate(ModelTag::L0, l0_data(sampler, sp), coeffs, opt);
  Trajectory pot = lagrangian_to_potential(run, coeffs);
  for (double r : constraint_residuals(pot, coeffs)) EXPECT_LT(r, 1e-9);
  // the defining relations hold per state
  for (std::size_t k = 0; k < run.size(); ++k) {
    EXPECT_LT((run.lagrangian[k].r_t + VectorField::gradient(pot.potential[k].u)).l2_norm(),
              1e-8);
    EXPECT_LT((cplx(-coeffs.bulk_modulus) * divergence(run.lagrangian[k].r) -
               cplx(coeffs.rho0) * pot.potential[k].u_t)
                  .l2_norm(),
              1e-8);
  }
}

TEST(PotentialToLagrangian, RoundTripAndSharedReconstruction) {
  auto sp = make_space(Geometry::ball(1.0), 3, 24);
  Coefficients coeffs = unit_coeffs(sp, 0.4, 1.0);
  FieldSampler sampler(11);
  SimulateOptions opt;
  opt.dt = 1e-3;
  opt.t_end = 0.05;
  opt.output_every = 1;
  Trajectory run = simulate(ModelTag::L0, l0_data(sampler, sp), coeffs, opt);
  Trajectory pot = lagrangian_to_potential(run, coeffs);
  Trajectory back = potential_to_lagrangian(pot, coeffs);
  EXPECT_LT(lagrangian_distance(run, back),
            1e-8 * (1.0 + pair_norm(run.lagrangian[0].configuration())));

  // constant-potential trajectories map to zero
  Trajectory flat;
  flat.tag = ModelTag::Potential;
  for (int k = 0; k <= 6; ++k) {
    flat.push_time(0.1 * k);
    flat.potential.emplace_back(ScalarBulkField::constant(sp, 2.5), SurfaceField::zero(sp),
                                ScalarBulkField::zero(sp), SurfaceField::zero(sp), 0.1 * k);
  }
  Trajectory z = potential_to_lagrangian(flat, coeffs);
  for (const auto& st : z.lagrangian)
    EXPECT_LT(pair_norm(st.configuration()) + st.r_t.l2_norm(), 1e-10);
}

TEST(PotentialToEulerian, KernelAndTimeDerivativeIdentity) {
  auto sp = make_space(Geometry::ball(1.0), 2, 24);
  Coefficients coeffs = unit_coeffs(sp, 0.0, 1.0);
  // a resolved smooth run: one slow eigenpair of the discrete generator
  ReferenceIntegrator ref(coeffs);
  Eigen::EigenSolver<Eigen::MatrixXd> es(ref.system_matrix());
  int best = -1;
  double best_om = 4.0;
  for (int k = 0; k < es.eigenvalues().size(); ++k) {
    double om = std::abs(es.eigenvalues()[k].imag());
    if (om > 1e-6 && om < best_om) {
      best_om = om;
      best = k;
    }
  }
  ASSERT_GE(best, 0);
  Eigen::VectorXcd x = es.eigenvectors().col(best).real().cast<cplx>();
  PotentialState init = ref.unflatten(x / x.norm(), 0.0);
  SimulateOptions opt;
  opt.dt = 1e-3;
  opt.t_end = 0.02;
  opt.output_every = 1;
  Trajectory pot = simulate(init, coeffs, opt);
  Trajectory eul = potential_to_eulerian(pot, coeffs);
  // centered time difference of p against -B div vvec
  double h = pot.times[1] - pot.times[0];
  for (std::size_t k = 1; k + 1 < eul.size(); ++k) {
    ScalarBulkField pt = cplx(1.0 / (2.0 * h)) * (eul.eulerian[k + 1].p - eul.eulerian[k - 1].p);
    ScalarBulkField rhs = cplx(-coeffs.bulk_modulus) * divergence(eul.eulerian[k].vvec);
    EXPECT_LT((pt - rhs).l2_norm(), 40.0 * h * h * (1.0 + rhs.l2_norm()) + 1e-7);
  }
}

TEST(CommutingDiagram, PotentialPathMatchesDirectEulerianMap) {
  auto sp = make_space(Geometry::ball(1.0), 3, 24);
  Coefficients coeffs = unit_coeffs(sp, 0.5, 0.0);
  FieldSampler sampler(17);
  SimulateOptions opt;
  opt.dt = 1e-3;
  opt.t_end = 0.05;
  opt.output_every = 1;
  ConfigurationPair p = sampler.pair(sp);
  ConfigurationPair vel = sampler.pair_in_L0(sp);
  Trajectory run = simulate(ModelTag::L, LagrangianState(p.s, p.z, vel.s, vel.z), coeffs, opt);
  Trajectory direct = lagrangian_to_eulerian(run, coeffs);
  Trajectory via_pot = potential_to_eulerian(lagrangian_to_potential(run, coeffs), coeffs);
  double d = 0.0, scale = 1.0;
  for (std::size_t k = 0; k < run.size(); ++k) {
    d = std::max(d, (direct.eulerian[k].p - via_pot.eulerian[k].p).l2_norm() +
                        (direct.eulerian[k].vvec - via_pot.eulerian[k].vvec).l2_norm() +
                        (direct.eulerian[k].v - via_pot.eulerian[k].v).l2_norm());
    scale = std::max(scale, direct.eulerian[k].p.l2_norm() + direct.eulerian[k].vvec.l2_norm());
  }
  EXPECT_LT(d, 1e-8 * scale);
}

TEST(StationaryDifference, DetectsEquivalenceModStationary) {
  auto sp = make_space(Geometry::ball(1.0), 3, 24);
  Coefficients coeffs = unit_coeffs(sp, 0.2, 1.0);
  FieldSampler sampler(19);
  SimulateOptions opt;
  opt.dt = 2e-3;
  opt.t_end = 0.05;
  opt.output_every = 5;
  Trajectory run = simulate(ModelTag::L0, l0_data(sampler, sp), coeffs, opt);

  StationaryDifferenceReport same = stationary_difference(run, run, coeffs);
  EXPECT_TRUE(same.equivalent);

  // shift by a stationary toroidal solution: still equivalent, nonzero difference
  Trajectory shifted = run;
  ToroidalField T = sampler.toroidal(sp);
  for (auto& st : shifted.lagrangian) st.r += VectorField::from_toroidal(T);
  StationaryDifferenceReport rep = stationary_difference(shifted, run, coeffs);
  EXPECT_TRUE(rep.equivalent);

  // a genuinely different trajectory is flagged
  Trajectory other = run;
  for (auto& st : other.lagrangian) st.v *= cplx(1.1);
  EXPECT_FALSE(stationary_difference(other, run, coeffs).equivalent);
}

TEST(StationaryDifference, FullModelRoundTripIsStationaryClass) {
  // the potential round trip on the largest zero-constraint model loses
  // exactly a stationary component (the kernel of the forward map)
  auto sp = make_space(Geometry::ball(1.0), 3, 24);
  Coefficients coeffs = unit_coeffs(sp, 0.3, 1.0);
  FieldSampler sampler(23);
  SimulateOptions opt;
  opt.dt = 1e-3;
  opt.t_end = 0.04;
  opt.output_every = 1;
  // trace-mismatched data with vanishing constraint value: base element
  // plus a toroidal field plus a harmonic gradient
  ConfigurationPair p = sampler.pair_in_L0(sp);
  p += ConfigurationPair(VectorField::from_toroidal(sampler.toroidal(sp)), SurfaceField::zero(sp));
  Eigen::VectorXcd prof(sp->n_r);
  for (int j = 0; j < sp->n_r; ++j) prof[j] = sp->radial_nodes[j];
  p += ConfigurationPair(VectorField::gradient(ScalarBulkField::mode(sp, 1, 0, prof)),
                         SurfaceField::zero(sp));
  ConfigurationPair vel = sampler.pair_in_L0(sp);
  Trajectory run = simulate(ModelTag::L, LagrangianState(p.s, p.z, vel.s, vel.z), coeffs, opt);
  Trajectory back = potential_to_lagrangian(lagrangian_to_potential(run, coeffs), coeffs);
  back.tag = ModelTag::L;
  StationaryDifferenceReport rep = stationary_difference(run, back, coeffs, 1e-7);
  EXPECT_TRUE(rep.equivalent);
  EXPECT_GT(pair_norm(run.lagrangian[0].configuration() - back.lagrangian[0].configuration()),
            1e-6);  // the kernel component is genuinely present
}

TEST(EulerianSplitOp, DecomposesIntoConstrainedPlusSpecial) {
  auto sp = make_space(Geometry::ball(1.0), 3, 24);
  Coefficients coeffs = unit_coeffs(sp, 0.2, 1.0);
  SpecialEquilibrium eq = special_equilibrium(coeffs);
  FieldSampler sampler(29);
  SimulateOptions opt;
  opt.dt = 2e-3;
  opt.t_end = 0.05;
  opt.output_every = 5;
  ConfigurationPair p = sampler.pair(sp);
  ConfigurationPair vel = sampler.pair_in_L0(sp);
  Trajectory run = simulate(ModelTag::L, LagrangianState(p.s, p.z, vel.s, vel.z), coeffs, opt);
  Trajectory eul = lagrangian_to_eulerian(run, coeffs);
  EulerianSplit split = eulerian_split(eul, coeffs, eq);
  for (double r : constraint_residuals(split.constrained, coeffs))
    EXPECT_LT(r, 1e-9 * (1.0 + pair_norm(p)));
  for (std::size_t k = 1; k < split.alpha.size(); ++k)
    EXPECT_LT(std::abs(split.alpha[k] - split.alpha[0]), 1e-9 * (1.0 + std::abs(split.alpha[0])));
}

TEST(WeakResidual, EngineRunsPassAndCorruptedRunsFail) {
  auto sp = make_space(Geometry::ball(1.0), 3, 24);
  Coefficients coeffs = unit_coeffs(sp, 0.5, 1.0);
  FieldSampler sampler(31);
  SimulateOptions opt;
  opt.dt = 1e-3;
  opt.t_end = 0.2;
  opt.output_every = 2;
  Trajectory run = simulate(ModelTag::L0, l0_data(sampler, sp), coeffs, opt);
  double tol = std::max(1e-8, 5.0 * opt.dt * opt.dt);

  WeakResidualReport lag = weak_residual(run, coeffs, 10);
  EXPECT_LT(lag.max_relative_residual, tol);

  WeakResidualReport eul = weak_residual(lagrangian_to_eulerian(run, coeffs), coeffs, 10);
  EXPECT_LT(eul.max_relative_residual, tol);

  WeakResidualReport pot = weak_residual(lagrangian_to_potential(run, coeffs), coeffs, 10);
  EXPECT_LT(pot.max_relative_residual, tol);

  Trajectory corrupted = run;
  for (auto& st : corrupted.lagrangian) st.v *= cplx(1.01);
  WeakResidualReport bad = weak_residual(corrupted, coeffs, 10);
  EXPECT_GT(bad.max_relative_residual, 100.0 * lag.max_relative_residual);
  EXPECT_GT(bad.max_relative_residual, 1e-3);
}

TEST(WeakResidual, StationaryEquilibriumTrajectoryPasses) {
  auto sp = make_space(Geometry::ball(1.0), 3, 24);
  Coefficients coeffs = unit_coeffs(sp, 0.2, 1.5);
  SpecialEquilibrium eq = special_equilibrium(coeffs);
  SimulateOptions opt;
  opt.dt = 1e-2;
  opt.t_end = 0.2;
  opt.output_every = 2;
  LagrangianState init(eq.s_bullet, eq.z_bullet, VectorField::zero(sp), SurfaceField::zero(sp));
  Trajectory run = simulate(ModelTag::L, init, coeffs, opt);
  WeakResidualReport rep = weak_residual(run, coeffs, 10);
  EXPECT_LT(rep.max_relative_residual, 1e-8);
}

}  // namespace
