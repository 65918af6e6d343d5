#include <gtest/gtest.h>

#include "acousto/membrane.hpp"
#include "acousto/random_fields.hpp"

using namespace acousto;

namespace {

SurfaceField cos_theta_field(const SpacePtr& sp, double base, double amp) {
  // base + amp*cos(theta) = base*1 + amp*sqrt(4pi/3) Y_10
  SurfaceField f = cplx(base) * SurfaceField::one(sp);
  f.coeffs[sh_flat_index(1, 0)] += amp * std::sqrt(4.0 * M_PI / 3.0);
  return f;
}

TEST(MembraneAssembly, ConstantCoefficientsAreDiagonal) {
  auto sp = make_space(Geometry::ball(2.0), 8, 16);
  double sigma0 = 1.5, kappa0 = 0.25, b2 = 4.0;
  MembraneOperator op = assemble_membrane(cplx(sigma0) * SurfaceField::one(sp),
                                          cplx(kappa0) * SurfaceField::one(sp), sp);
  for (int i = 0; i < sp->n_modes; ++i) {
    double ll1 = sp->mode_l[i] * (sp->mode_l[i] + 1.0);
    for (int j = 0; j < sp->n_modes; ++j) {
      double expect = (i == j) ? sigma0 * ll1 + kappa0 * b2 : 0.0;
      EXPECT_NEAR(op.matrix(i, j), expect, 1e-11 * std::max(1.0, expect));
    }
  }
  // strong operator on a single harmonic: (sigma0 l(l+1)/b^2 + kappa0) Y_lm
  SurfaceField y = SurfaceField::harmonic(sp, 3, -2);
  SurfaceField res = op.apply_strong(y);
  double expect = sigma0 * 12.0 / b2 + kappa0;
  EXPECT_NEAR(std::abs(res.coeffs[sh_flat_index(3, -2)] - cplx(expect)), 0.0, 1e-12 * expect);
}

TEST(MembraneAssembly, ConstantsInKernelWhenKappaZero) {
  auto sp = make_space(Geometry::ball(1.0), 6, 12);
  MembraneOperator op =
      assemble_membrane(SurfaceField::one(sp), SurfaceField::zero(sp), sp);
  EXPECT_TRUE(op.kappa_zero);
  Eigen::VectorXd ones = op.matrix * SurfaceField::one(sp).coeffs.real();
  EXPECT_LT(ones.cwiseAbs().maxCoeff(), 1e-11);
}

TEST(MembraneAssembly, VariableSigmaCouplesNeighborDegreesAndMatchesFineQuadrature) {
  auto sp = make_space(Geometry::ball(1.0), 8, 16);
  SurfaceField sigma = cos_theta_field(sp, 1.0, 0.5);
  MembraneOperator op = assemble_membrane(sigma, SurfaceField::zero(sp), sp);
  // symmetry
  EXPECT_LT((op.matrix - op.matrix.transpose()).norm(), 1e-12 * op.matrix.norm());
  // coupling pattern: only l' = l, l +- 1 with the same m survive
  for (int i = 0; i < sp->n_modes; ++i)
    for (int j = 0; j < sp->n_modes; ++j) {
      int li = sp->mode_l[i], mi = sp->mode_m[i];
      int lj = sp->mode_l[j], mj = sp->mode_m[j];
      if (mi != mj || std::abs(li - lj) > 1)
        EXPECT_LT(std::abs(op.matrix(i, j)), 1e-10) << i << " " << j;
    }
  // independent oracle: same assembly at doubled quadrature resolution
  SurfaceRule fine(sp->l_max, 2 * sp->surface.n_theta, 2 * sp->surface.n_phi);
  MembraneOperator fine_op = assemble_membrane(sigma, SurfaceField::zero(sp), sp, fine);
  EXPECT_LT((op.matrix - fine_op.matrix).cwiseAbs().maxCoeff(), 1e-11);
}

TEST(MembraneAssembly, CoefficientBoundsEnforced) {
  auto sp = make_space(Geometry::ball(1.0), 4, 12);
  SurfaceField bad_sigma = cos_theta_field(sp, 0.2, 0.5);  // dips negative
  EXPECT_THROW(assemble_membrane(bad_sigma, SurfaceField::zero(sp), sp), std::invalid_argument);
  SurfaceField bad_kappa = cos_theta_field(sp, 0.0, 0.3);
  EXPECT_THROW(assemble_membrane(SurfaceField::one(sp), bad_kappa, sp), std::invalid_argument);
}

TEST(SurfaceEquilibrium, ConstantCoefficientsClosedForm) {
  auto sp = make_space(Geometry::ball(1.0), 6, 12);
  double kappa0 = 2.0, B = 3.0;
  MembraneOperator op =
      assemble_membrane(SurfaceField::one(sp), cplx(kappa0) * SurfaceField::one(sp), sp);
  SurfaceField z = solve_surface_equilibrium(op, B);
  SurfaceField expect = cplx(-B / kappa0) * SurfaceField::one(sp);
  EXPECT_LT((z - expect).l2_norm(), 1e-12);
}

TEST(SurfaceEquilibrium, KappaZeroBranch) {
  auto sp = make_space(Geometry::ball(1.0), 4, 12);
  MembraneOperator op = assemble_membrane(SurfaceField::one(sp), SurfaceField::zero(sp), sp);
  SurfaceField z = solve_surface_equilibrium(op, 0.0);
  EXPECT_LT((z - SurfaceField::one(sp)).l2_norm(), 1e-14);
  EXPECT_THROW(solve_surface_equilibrium(op, 1.0), SurfaceEquilibriumError);
}

TEST(SurfaceEquilibrium, VariableCoefficientsWeakFormResidual) {
  auto sp = make_space(Geometry::ball(1.0), 16, 24);
  SurfaceField sigma = cos_theta_field(sp, 1.0, 0.5);
  SurfaceField kappa = SurfaceField::one(sp);
  MembraneOperator op = assemble_membrane(sigma, kappa, sp);
  cplx p0 = 1.0;
  SurfaceField z = solve_surface_equilibrium(op, p0);
  EXPECT_TRUE(z.is_real(1e-13 * z.coeffs.norm()));

  double b2 = 1.0;
  Eigen::VectorXcd resid = mul_rc(op.matrix, z.coeffs);
  resid[0] += p0 * b2 * std::sqrt(4.0 * M_PI);
  FieldSampler sampler(123);
  for (int trial = 0; trial < 50; ++trial) {
    SurfaceField psi = sampler.surface(sp, false);
    cplx weak = psi.coeffs.dot(resid);
    double scale = psi.coeffs.norm() * std::max(1.0, z.coeffs.norm());
    EXPECT_LT(std::abs(weak), 1e-10 * scale);
  }
}

TEST(SurfaceEquilibrium, StrongWeakAgreement) {
  auto sp = make_space(Geometry::ball(1.3), 8, 16);
  double kappa0 = 0.7;
  MembraneOperator op =
      assemble_membrane(SurfaceField::one(sp), cplx(kappa0) * SurfaceField::one(sp), sp);
  cplx p0 = 2.0;
  SurfaceField z = solve_surface_equilibrium(op, p0);
  SurfaceField strong = op.apply_strong(z) + p0 * SurfaceField::one(sp);
  EXPECT_LT(strong.l2_norm(), 1e-9);
}

}  // namespace
