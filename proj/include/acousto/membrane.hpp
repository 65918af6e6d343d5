#pragma once

#include <stdexcept>

#include <Eigen/Dense>

#include "acousto/fields.hpp"

namespace acousto {

/// Real nodal values of a (real-coefficient) surface field at the nodes of
/// a quadrature rule.
inline Eigen::VectorXd nodal_values(const SurfaceRule& rule, const SurfaceField& f) {
  if (rule.l_max != f.space->l_max)
    throw std::invalid_argument("surface rule truncation does not match the field");
  if (!f.is_real(0.0) && f.coeffs.imag().cwiseAbs().maxCoeff() > 1e-14 * f.coeffs.norm())
    throw std::invalid_argument("coefficient field must be real-valued");
  return rule.Y * f.coeffs.real();
}

/// Gram matrix  int_{S^2} w Y_i Y_j  (unit sphere; callers add the b^2
/// surface-measure factor of Gamma1 where appropriate).
inline Eigen::MatrixXd surface_gram(const SurfaceRule& rule, const Eigen::VectorXd& w_nodes) {
  Eigen::VectorXd d = rule.weights.cwiseProduct(w_nodes);
  return rule.Y.transpose() * d.asDiagonal() * rule.Y;
}

/// Stiffness  int_{Gamma1} sigma (grad_G Y_i, grad_G Y_j); the two radius
/// factors cancel, so the assembly runs on the unit sphere.
inline Eigen::MatrixXd surface_stiffness(const SurfaceRule& rule, const Eigen::VectorXd& sigma_nodes) {
  Eigen::VectorXd d = rule.weights.cwiseProduct(sigma_nodes);
  return rule.Yth.transpose() * d.asDiagonal() * rule.Yth +
         rule.Yphs.transpose() * d.asDiagonal() * rule.Yphs;
}

/// Galerkin form of  v -> -Div_G(sigma grad_G v) + kappa v  on Gamma1.
struct MembraneOperator {
  SpacePtr space;
  Eigen::MatrixXd matrix;  // stiffness(sigma) + b^2 gram(kappa)
  double sigma_min = 0.0;
  double kappa_min = 0.0;
  bool kappa_zero = false;
  Eigen::LDLT<Eigen::MatrixXd> factorization;

  /// Coefficients of  -Div_G(sigma grad_G z) + kappa z  for band-limited z.
  SurfaceField apply_strong(const SurfaceField& z) const {
    require_same_space(space, z.space, "membrane apply");
    double b2 = space->geometry.outer_radius * space->geometry.outer_radius;
    return SurfaceField(space, mul_rc(matrix, z.coeffs) / b2);
  }
};

inline MembraneOperator assemble_membrane(const SurfaceField& sigma, const SurfaceField& kappa,
                                          const SpacePtr& space, const SurfaceRule& rule) {
  require_same_space(space, sigma.space, "membrane assembly");
  require_same_space(space, kappa.space, "membrane assembly");
  MembraneOperator op;
  op.space = space;
  Eigen::VectorXd sig = nodal_values(rule, sigma);
  Eigen::VectorXd kap = nodal_values(rule, kappa);
  op.sigma_min = sig.minCoeff();
  op.kappa_min = kap.minCoeff();
  op.kappa_zero = kappa.coeffs.cwiseAbs().maxCoeff() == 0.0;
  if (!(op.sigma_min > 0.0))
    throw std::invalid_argument("membrane coefficients: min sigma > 0 is required");
  if (op.kappa_min < -1e-14 * std::max(1.0, kap.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("membrane coefficients: kappa >= 0 is required");
  double b2 = space->geometry.outer_radius * space->geometry.outer_radius;
  op.matrix = surface_stiffness(rule, sig) + b2 * surface_gram(rule, kap);
  op.factorization.compute(op.matrix);
  return op;
}

inline MembraneOperator assemble_membrane(const SurfaceField& sigma, const SurfaceField& kappa,
                                          const SpacePtr& space) {
  return assemble_membrane(sigma, kappa, space, space->surface);
}

struct SurfaceEquilibriumError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Unique weak solution of  -Div_G(sigma grad_G z) + kappa z + p0 = 0 when
/// kappa is not identically zero; for kappa == 0 the equation is solvable
/// only for p0 = 0, in which case the kernel representative 1 is returned.
inline SurfaceField solve_surface_equilibrium(const MembraneOperator& op, cplx p0) {
  if (op.kappa_zero) {
    if (p0 != cplx(0.0))
      throw SurfaceEquilibriumError(
          "surface equilibrium: with kappa == 0 the equation has no solution for p0 != 0");
    return SurfaceField::one(op.space);
  }
  double b2 = op.space->geometry.outer_radius * op.space->geometry.outer_radius;
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(op.space->n_modes);
  rhs[0] = -p0 * b2 * std::sqrt(4.0 * M_PI);
  Eigen::VectorXcd z(op.space->n_modes);
  z.real() = op.factorization.solve(rhs.real().eval());
  z.imag() = op.factorization.solve(rhs.imag().eval());
  return SurfaceField(op.space, z);
}

}  // namespace acousto
