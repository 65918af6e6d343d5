#pragma once

#include <memory>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "acousto/fields.hpp"

namespace acousto {

struct CompatibilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Per-mode radial solver for  -Laplace(phi) = w,  d_nu phi = g  on the
/// boundary spheres, acting through the Euler form
///   E_l phi = r^2 phi'' + 2 r phi' - l(l+1) phi = -r^2 w.
///
/// The trial space is the interpolation space P_{n_r-1} itself, so the
/// returned nodal samples represent the solved polynomial without loss.
/// The boundary rows (and the zero-mean gauge row for l = 0) are imposed
/// as hard constraints; the collocation equations are satisfied in the
/// least-squares sense over the Gauss nodes.  For data whose exact
/// solution lies in the trial space the residual is zero and the solve is
/// exact to roundoff; for rougher data the equation residual spreads over
/// the nodes while traces, gauge, and hence every quantity tied to the
/// divergence theorem remain exact.
class RadialPoissonSolver {
 public:
  explicit RadialPoissonSolver(const DiscreteSpace& sp) : sp_(sp) {
    per_l_.resize(sp.l_max + 1);
    for (int l = 0; l <= sp.l_max; ++l) build_mode(l);
  }

  /// Solve one (l,m) mode. bc_a/bc_b are the values of phi'(a), phi'(b);
  /// bc_a is ignored on the ball.  The l = 0 mode is pinned to zero
  /// quadrature volume mean.
  Eigen::VectorXcd solve_mode(int l, const Eigen::VectorXcd& w_nodes, cplx bc_a, cplx bc_b) const {
    const auto& ms = per_l_[l];
    const int N = sp_.n_r;
    Eigen::VectorXcd rhs(N);
    for (int j = 0; j < N; ++j) {
      double r = sp_.radial_nodes[j];
      rhs[j] = -r * r * w_nodes[j];
    }
    Eigen::VectorXcd d(ms.n_constraints);
    {
      int k = 0;
      if (sp_.geometry.has_gamma0()) d[k++] = bc_a;
      d[k++] = bc_b;
      if (l == 0) d[k++] = cplx(0.0);  // zero volume mean
    }
    // particular solution of the constraints, then least squares on the
    // constraint null space
    Eigen::VectorXcd cp(N);
    cp.real() = ms.constraints_cod.solve(d.real().eval());
    cp.imag() = ms.constraints_cod.solve(d.imag().eval());
    Eigen::VectorXcd resid = rhs - mul_rc(ms.El, cp);
    Eigen::VectorXcd y(ms.null_dim);
    y.real() = ms.reduced_qr.solve(resid.real().eval());
    y.imag() = ms.reduced_qr.solve(resid.imag().eval());
    Eigen::VectorXcd c = cp + mul_rc(ms.null_basis, y);
    return mul_rc(ms.values_at_nodes, c);
  }

  static const RadialPoissonSolver& get(const SpacePtr& sp) {
    std::call_once(sp->elliptic_once, [&sp]() {
      sp->elliptic_cache = std::make_shared<const RadialPoissonSolver>(*sp);
    });
    return *static_cast<const RadialPoissonSolver*>(sp->elliptic_cache.get());
  }

 private:
  struct ModeSolver {
    int n_constraints = 0;
    int null_dim = 0;
    Eigen::MatrixXd El;               // (n_r x n_r) Euler operator on the Legendre basis
    Eigen::MatrixXd values_at_nodes;  // (n_r x n_r) basis values, to sample the solution
    Eigen::MatrixXd null_basis;       // (n_r x null_dim)
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> constraints_cod;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> reduced_qr;
  };

  const DiscreteSpace& sp_;
  std::vector<ModeSolver> per_l_;

  void build_mode(int l) {
    const double a = sp_.geometry.inner_radius, b = sp_.geometry.outer_radius;
    const bool shell = sp_.geometry.has_gamma0();
    const int N = sp_.n_r;
    ModeSolver ms;

    ms.El.resize(N, N);
    ms.values_at_nodes.resize(N, N);
    const double s1 = 2.0 / (b - a);  // d rho / d r
    Eigen::VectorXd pv, p1, p2;
    for (int j = 0; j < N; ++j) {
      double r = sp_.radial_nodes[j];
      double rho = (2.0 * r - (a + b)) / (b - a);
      legendre_all(N - 1, rho, pv, p1, p2);
      for (int k = 0; k < N; ++k) {
        ms.values_at_nodes(j, k) = pv[k];
        ms.El(j, k) = r * r * p2[k] * s1 * s1 + 2.0 * r * p1[k] * s1 - l * (l + 1.0) * pv[k];
      }
    }
    ms.n_constraints = (shell ? 2 : 1) + (l == 0 ? 1 : 0);
    Eigen::MatrixXd C(ms.n_constraints, N);
    int row = 0;
    if (shell) {
      legendre_all(N - 1, -1.0, pv, p1, p2);
      C.row(row++) = (p1 * s1).transpose();
    }
    legendre_all(N - 1, 1.0, pv, p1, p2);
    C.row(row++) = (p1 * s1).transpose();
    if (l == 0) {
      Eigen::VectorXd mean_row(N);
      for (int k = 0; k < N; ++k)
        mean_row[k] = sp_.radial_weights.dot(ms.values_at_nodes.col(k));
      C.row(row++) = mean_row.transpose();
    }
    ms.constraints_cod.compute(C);
    if (ms.constraints_cod.rank() < ms.n_constraints)
      throw std::logic_error("radial solver: degenerate constraint rows (mode l=" +
                             std::to_string(l) + ")");

    // orthonormal basis of the constraint null space
    Eigen::HouseholderQR<Eigen::MatrixXd> qr_ct(C.transpose());
    Eigen::MatrixXd Q = qr_ct.householderQ();
    ms.null_dim = N - ms.n_constraints;
    ms.null_basis = Q.rightCols(ms.null_dim);
    ms.reduced_qr.compute(ms.El * ms.null_basis);
    if (ms.reduced_qr.rank() < ms.null_dim)
      throw std::logic_error("radial solver: rank-deficient collocation system (mode l=" +
                             std::to_string(l) + ")");
    per_l_[l] = std::move(ms);
  }
};

namespace detail {
inline double data_scale(const ScalarBulkField& w, const SurfaceField& g0,
                         const SurfaceField& g1) {
  const auto& geo = w.space->geometry;
  double s = w.l2_norm() * std::sqrt(geo.volume()) +
             g1.l2_norm() * std::sqrt(geo.area_gamma1());
  if (geo.has_gamma0()) s += g0.l2_norm() * std::sqrt(geo.area_gamma0());
  return s;
}
}  // namespace detail

/// Inhomogeneous Neumann problem  -Laplace(phi) = w,  d_nu phi = g0 on
/// Gamma0,  d_nu phi = g1 on Gamma1, solved mode-by-mode; the result is
/// the zero-volume-mean representative.  Requires the compatibility
/// condition  int_Omega w + int_Gamma0 g0 + int_Gamma1 g1 = 0.
inline ScalarBulkField solve_neumann_poisson(const ScalarBulkField& w, const SurfaceField& g0,
                                             const SurfaceField& g1, double tol_compat_rel = 1e-9,
                                             double scale_floor = 0.0) {
  const SpacePtr& sp = w.space;
  require_same_space(sp, g1.space, "neumann solve");
  const bool shell = sp->geometry.has_gamma0();
  if (shell) require_same_space(sp, g0.space, "neumann solve");

  cplx balance = integrate_volume(w) + integrate_surface(g1);
  if (shell) {
    double a = sp->geometry.inner_radius;
    balance += a * a * std::sqrt(4.0 * M_PI) * g0.coeffs[0];  // integral over Gamma0
  }
  double scale = std::max(detail::data_scale(w, g0, g1), scale_floor);
  if (std::abs(balance) > tol_compat_rel * std::max(scale, 1e-300))
    throw CompatibilityError("neumann solve: data violate the flux compatibility condition");

  const auto& solver = RadialPoissonSolver::get(sp);
  ScalarBulkField phi(sp);
  for (int i = 0; i < sp->n_modes; ++i) {
    int l = sp->mode_l[i];
    // nu is outward for Omega: on Gamma1 d_nu = d_r, on Gamma0 d_nu = -d_r.
    cplx bc_b = g1.coeffs[i];
    cplx bc_a = shell ? -g0.coeffs[i] : cplx(0.0);
    phi.data.row(i) = solver.solve_mode(l, w.data.row(i).transpose(), bc_a, bc_b).transpose();
  }
  return phi;
}

/// Div-curl system: find s with  div s = w,  s.nu = -z0 on Gamma0,
/// s.nu = -z1 on Gamma1 and prescribed toroidal (curl) content, built as
/// s = -grad(phi) + T.  Compatibility: int w + int z0 + int z1 = 0.
inline VectorField solve_div_curl(const ScalarBulkField& w, const SurfaceField& z0,
                                  const SurfaceField& z1, const ToroidalField& curl_source,
                                  double tol_compat_rel = 1e-9, double scale_floor = 0.0) {
  ScalarBulkField phi = solve_neumann_poisson(w, z0, z1, tol_compat_rel, scale_floor);
  phi *= cplx(-1.0);
  return VectorField(std::move(phi), curl_source);
}

inline VectorField solve_div_curl(const ScalarBulkField& w, const SurfaceField& z0,
                                  const SurfaceField& z1, double tol_compat_rel = 1e-9) {
  return solve_div_curl(w, z0, z1, ToroidalField::zero(w.space), tol_compat_rel);
}

/// Variant for problems whose data satisfy the compatibility condition by
/// construction: the roundoff-level imbalance is checked against the scale
/// of the originating problem and then removed through the mean of z1.
inline VectorField solve_div_curl_balanced(const ScalarBulkField& w, const SurfaceField& z0,
                                           const SurfaceField& z1, const ToroidalField& curl_source,
                                           double guard_scale) {
  const SpacePtr& sp = w.space;
  cplx imbalance = integrate_volume(w) + integrate_surface(z1);
  if (sp->geometry.has_gamma0()) {
    double a = sp->geometry.inner_radius;
    imbalance += a * a * std::sqrt(4.0 * M_PI) * z0.coeffs[0];
  }
  if (std::abs(imbalance) > 1e-9 * std::max(guard_scale, 1e-300))
    throw std::logic_error("internal flux problem lost its compatibility guarantee");
  SurfaceField z1_adj = z1;
  z1_adj -= cplx(imbalance / sp->geometry.area_gamma1()) * SurfaceField::one(sp);
  return solve_div_curl(w, z0, z1_adj, curl_source, 1e-9, guard_scale);
}

}  // namespace acousto
