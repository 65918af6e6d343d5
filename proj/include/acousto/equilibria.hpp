#pragma once

#include <array>

#include "acousto/coefficients.hpp"
#include "acousto/elliptic.hpp"
#include "acousto/model_tags.hpp"

namespace acousto {

/// A configuration (s, z): bulk displacement field plus boundary
/// deformation on Gamma1.
struct ConfigurationPair {
  VectorField s;
  SurfaceField z;

  ConfigurationPair() = default;
  ConfigurationPair(VectorField s_, SurfaceField z_) : s(std::move(s_)), z(std::move(z_)) {
    require_same_space(s.space(), z.space, "configuration pair");
  }
  static ConfigurationPair zero(const SpacePtr& sp) {
    return ConfigurationPair(VectorField::zero(sp), SurfaceField::zero(sp));
  }
  const SpacePtr& space() const { return z.space; }

  ConfigurationPair& operator+=(const ConfigurationPair& o) { s += o.s; z += o.z; return *this; }
  ConfigurationPair& operator-=(const ConfigurationPair& o) { s -= o.s; z -= o.z; return *this; }
  ConfigurationPair& operator*=(cplx a) { s *= a; z *= a; return *this; }
  friend ConfigurationPair operator+(ConfigurationPair x, const ConfigurationPair& y) { return x += y; }
  friend ConfigurationPair operator-(ConfigurationPair x, const ConfigurationPair& y) { return x -= y; }
  friend ConfigurationPair operator*(cplx a, ConfigurationPair x) { return x *= a; }
};

/// Graph norm used to scale membership and comparison tolerances.
inline double pair_norm(const ConfigurationPair& p) {
  double s2 = p.s.l2_norm();
  double d2 = divergence(p.s).l2_norm();
  double z2 = p.z.h1_norm();
  return std::sqrt(s2 * s2 + d2 * d2 + z2 * z2);
}

/// The constraint functional  L(s,z) = int_Gamma s.nu + int_Gamma1 z,
/// evaluated through the divergence theorem (volume form).
inline cplx constraint_L(const ConfigurationPair& p) {
  return integrate_volume(divergence(p.s)) + integrate_surface(p.z);
}

/// Same functional from the boundary traces; agrees with the volume form
/// to roundoff and serves as its cross-check.
inline cplx constraint_L_surface(const ConfigurationPair& p) {
  cplx acc = integrate_surface(normal_trace(p.s, BoundaryPart::Gamma1)) + integrate_surface(p.z);
  if (p.space()->geometry.has_gamma0()) {
    SurfaceField t0 = normal_trace(p.s, BoundaryPart::Gamma0);
    double a = p.space()->geometry.inner_radius;
    acc += a * a * std::sqrt(4.0 * M_PI) * t0.coeffs[0];
  }
  return acc;
}

/// The distinguished equilibrium spanning the extra direction of the two
/// largest models: (0, 1) when kappa == 0, else (s*, z*) where z* solves
/// the membrane equilibrium with forcing B and s* the unit-divergence
/// flux problem.
struct SpecialEquilibrium {
  VectorField s_bullet;
  SurfaceField z_bullet;
  cplx L_value = 0.0;
  bool kappa_zero = true;

  ConfigurationPair pair() const { return ConfigurationPair(s_bullet, z_bullet); }
};

inline SpecialEquilibrium special_equilibrium(const Coefficients& coeffs,
                                              const MembraneOperator& op) {
  const SpacePtr& sp = coeffs.space();
  SpecialEquilibrium eq;
  eq.kappa_zero = coeffs.kappa_zero;
  if (coeffs.kappa_zero) {
    eq.s_bullet = VectorField::zero(sp);
    eq.z_bullet = SurfaceField::one(sp);
  } else {
    eq.z_bullet = solve_surface_equilibrium(op, coeffs.bulk_modulus);
    ScalarBulkField w = ScalarBulkField::constant(sp, -1.0);
    double ratio = sp->geometry.volume() / sp->geometry.area_gamma1();
    SurfaceField z1 = cplx(ratio) * SurfaceField::one(sp);
    eq.s_bullet = solve_div_curl(w, SurfaceField::zero(sp), z1);
  }
  eq.L_value = constraint_L(eq.pair());
  return eq;
}

inline SpecialEquilibrium special_equilibrium(const Coefficients& coeffs) {
  MembraneOperator op = assemble_membrane(coeffs.sigma, coeffs.kappa, coeffs.space());
  return special_equilibrium(coeffs, op);
}

/// ell = L(s,z) / L(s_bullet, z_bullet); the denominator never vanishes.
inline cplx ell(const ConfigurationPair& p, const SpecialEquilibrium& eq) {
  return constraint_L(p) / eq.L_value;
}

/// Which of the six models' configuration spaces contain (s,z).
struct MembershipReport {
  bool curl_free = false;
  bool trace_gamma0_zero = false;
  bool trace_gamma1_matches_minus_z = false;
  bool L_zero = false;
  std::array<bool, 6> models{};  // indexed by ModelTag L0..L

  bool in(ModelTag t) const { return models[static_cast<int>(t)]; }
};

inline MembershipReport membership(const ConfigurationPair& p, double tol_rel = 1e-9) {
  const auto& geo = p.space()->geometry;
  double scale = std::max(pair_norm(p), 1e-300);
  MembershipReport rep;
  rep.curl_free = p.s.toroidal.l2_norm() <= tol_rel * scale;
  rep.trace_gamma0_zero =
      !geo.has_gamma0() ||
      normal_trace(p.s, BoundaryPart::Gamma0).l2_norm() <= tol_rel * scale;
  rep.trace_gamma1_matches_minus_z =
      (normal_trace(p.s, BoundaryPart::Gamma1) + p.z).l2_norm() <= tol_rel * scale;
  // Threshold chosen so that the trace conditions imply L = 0 (Cauchy-
  // Schwarz), keeping the membership sets upward closed.
  double c_dom = std::sqrt(geo.area_gamma1()) + std::sqrt(geo.area_gamma0());
  rep.L_zero = std::abs(constraint_L(p)) <= tol_rel * scale * c_dom;
  bool traces = rep.trace_gamma0_zero && rep.trace_gamma1_matches_minus_z;
  rep.models[static_cast<int>(ModelTag::L0)] = rep.curl_free && traces;
  rep.models[static_cast<int>(ModelTag::L1)] = traces;
  rep.models[static_cast<int>(ModelTag::L2)] = rep.curl_free && rep.L_zero;
  rep.models[static_cast<int>(ModelTag::L3)] = rep.L_zero;
  rep.models[static_cast<int>(ModelTag::L4)] = rep.curl_free;
  rep.models[static_cast<int>(ModelTag::L)] = true;
  return rep;
}

/// Equilibrium test: p0 is the volume mean of -B div s; the residual adds
/// the L^2 deviation of -B div s from p0 and the membrane equation
/// residual on Gamma1.
struct EquilibriumResidual {
  cplx p0 = 0.0;
  double residual = 0.0;
};

inline EquilibriumResidual equilibrium_residual(const ConfigurationPair& p,
                                                const Coefficients& coeffs,
                                                const MembraneOperator& op) {
  const SpacePtr& sp = p.space();
  ScalarBulkField minus_b_div = cplx(-coeffs.bulk_modulus) * divergence(p.s);
  EquilibriumResidual out;
  out.p0 = integrate_volume(minus_b_div) / sp->geometry.volume();
  ScalarBulkField dev = minus_b_div - ScalarBulkField::constant(sp, out.p0);
  SurfaceField surf = op.apply_strong(p.z) + out.p0 * SurfaceField::one(sp);
  out.residual = dev.l2_norm() + surf.l2_norm();
  return out;
}

inline EquilibriumResidual equilibrium_residual(const ConfigurationPair& p,
                                                const Coefficients& coeffs) {
  MembraneOperator op = assemble_membrane(coeffs.sigma, coeffs.kappa, coeffs.space());
  return equilibrium_residual(p, coeffs, op);
}

/// Structural split  (s,z) = onto_E + onto_L0  with onto_E an equilibrium
/// of the full model and onto_L0 in the smallest configuration space.
struct StructuralDecomposition {
  ConfigurationPair onto_E;
  ConfigurationPair onto_L0;
};

namespace detail {
inline StructuralDecomposition structural_from_lambda(const ConfigurationPair& p,
                                                      const SpecialEquilibrium& eq, cplx lambda,
                                                      const ScalarBulkField& div_f) {
  const SpacePtr& sp = p.space();
  SurfaceField tr1 = normal_trace(p.s, BoundaryPart::Gamma1);
  SurfaceField tr0 = sp->geometry.has_gamma0() ? normal_trace(p.s, BoundaryPart::Gamma0)
                                               : SurfaceField::zero(sp);
  SurfaceField z_dyn = p.z - lambda * eq.z_bullet;

  double guard = pair_norm(p) + std::abs(lambda) * pair_norm(eq.pair());
  VectorField f = solve_div_curl_balanced(div_f, cplx(-1.0) * tr0, cplx(-1.0) * (tr1 + z_dyn),
                                          p.s.toroidal, guard);
  VectorField g = solve_div_curl_balanced(divergence(p.s) - div_f, SurfaceField::zero(sp), z_dyn,
                                          ToroidalField::zero(sp), guard);
  StructuralDecomposition out;
  out.onto_E = ConfigurationPair(std::move(f), lambda * eq.z_bullet);
  out.onto_L0 = ConfigurationPair(std::move(g), z_dyn);
  return out;
}
}  // namespace detail

inline StructuralDecomposition project_structural(const ConfigurationPair& p,
                                                  const SpecialEquilibrium& eq) {
  cplx lambda = ell(p, eq);
  ScalarBulkField div_f = lambda * divergence(eq.s_bullet);
  return detail::structural_from_lambda(p, eq, lambda, div_f);
}

/// The same projectors assembled from their case-split closed forms
/// (kappa == 0 and kappa != 0 take different explicit data); used as an
/// independent route to cross-check project_structural.
inline StructuralDecomposition project_structural_explicit(const ConfigurationPair& p,
                                                           const SpecialEquilibrium& eq) {
  const SpacePtr& sp = p.space();
  cplx num = constraint_L_surface(p);
  if (eq.kappa_zero) {
    cplx lambda = num / sp->geometry.area_gamma1();
    return detail::structural_from_lambda(p, eq, lambda, ScalarBulkField::zero(sp));
  }
  cplx zstar_int = integrate_surface(eq.z_bullet);
  cplx den = -sp->geometry.volume() + zstar_int;
  cplx lambda = num / den;
  ScalarBulkField div_f = ScalarBulkField::constant(sp, num / (sp->geometry.volume() - zstar_int));
  return detail::structural_from_lambda(p, eq, lambda, div_f);
}

/// Four-way atomic split: dynamic core, solenoidal-tangential equilibria,
/// harmonic-gradient equilibria, and the special direction.
struct AtomicDecomposition {
  ConfigurationPair on_L0;
  ConfigurationPair on_E1;
  ConfigurationPair on_E2;
  ConfigurationPair on_Ebullet;
};

inline AtomicDecomposition project_atomic(const ConfigurationPair& p,
                                          const SpecialEquilibrium& eq) {
  const SpacePtr& sp = p.space();
  cplx lambda = ell(p, eq);
  AtomicDecomposition out;
  out.on_E1 = ConfigurationPair(VectorField::from_toroidal(p.s.toroidal), SurfaceField::zero(sp));
  out.on_Ebullet = lambda * eq.pair();

  SurfaceField tr1 = normal_trace(p.s, BoundaryPart::Gamma1);
  SurfaceField tr0 = sp->geometry.has_gamma0() ? normal_trace(p.s, BoundaryPart::Gamma0)
                                               : SurfaceField::zero(sp);
  SurfaceField tr1_bullet = normal_trace(eq.s_bullet, BoundaryPart::Gamma1);
  SurfaceField k_gamma1 = tr1 + p.z - lambda * (tr1_bullet + eq.z_bullet);
  double guard = pair_norm(p) + std::abs(lambda) * pair_norm(eq.pair());
  VectorField k = solve_div_curl_balanced(ScalarBulkField::zero(sp), cplx(-1.0) * tr0,
                                          cplx(-1.0) * k_gamma1, ToroidalField::zero(sp), guard);
  out.on_E2 = ConfigurationPair(std::move(k), SurfaceField::zero(sp));
  out.on_L0 = ConfigurationPair(p.s, p.z);
  out.on_L0 -= out.on_E1;
  out.on_L0 -= out.on_E2;
  out.on_L0 -= out.on_Ebullet;
  return out;
}

}  // namespace acousto
