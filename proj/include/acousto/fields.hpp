#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

#include "acousto/space.hpp"

namespace acousto {

using cplx = std::complex<double>;

// Mixed real-matrix x complex-vector products without materializing a
// complex copy of the (often large) real factor.
inline Eigen::VectorXcd mul_rc(const Eigen::MatrixXd& A, const Eigen::VectorXcd& x) {
  Eigen::VectorXcd out(A.rows());
  out.real() = A * x.real();
  out.imag() = A * x.imag();
  return out;
}
inline Eigen::MatrixXcd mul_cr(const Eigen::MatrixXcd& A, const Eigen::MatrixXd& B) {
  Eigen::MatrixXcd out(A.rows(), B.cols());
  out.real() = A.real() * B;
  out.imag() = A.imag() * B;
  return out;
}
inline Eigen::VectorXcd mul_cr_vec(const Eigen::MatrixXcd& A, const Eigen::VectorXd& x) {
  Eigen::VectorXcd out(A.rows());
  out.real() = A.real() * x;
  out.imag() = A.imag() * x;
  return out;
}
inline Eigen::VectorXcd cwise_rc(const Eigen::VectorXd& a, const Eigen::VectorXcd& b) {
  Eigen::VectorXcd out(b.size());
  out.real() = a.cwiseProduct(b.real());
  out.imag() = a.cwiseProduct(b.imag());
  return out;
}
inline std::complex<double> dot_rc(const Eigen::VectorXd& a, const Eigen::VectorXcd& b) {
  return {a.dot(b.real()), a.dot(b.imag())};
}

/// Scalar function on Gamma1 stored as coefficients against the real
/// orthonormal harmonics of the unit sphere; the L^2(Gamma1) norm is
/// b * |coeffs|_2.
struct SurfaceField {
  SpacePtr space;
  Eigen::VectorXcd coeffs;

  SurfaceField() = default;
  explicit SurfaceField(SpacePtr sp)
      : space(std::move(sp)), coeffs(Eigen::VectorXcd::Zero(space->n_modes)) {}
  SurfaceField(SpacePtr sp, Eigen::VectorXcd c) : space(std::move(sp)), coeffs(std::move(c)) {
    if (coeffs.size() != space->n_modes)
      throw std::invalid_argument("SurfaceField: coefficient count does not match truncation");
  }

  static SurfaceField zero(SpacePtr sp) { return SurfaceField(std::move(sp)); }
  /// The constant function 1 on Gamma1.
  static SurfaceField one(SpacePtr sp) {
    SurfaceField f(std::move(sp));
    f.coeffs[0] = std::sqrt(4.0 * M_PI);
    return f;
  }
  static SurfaceField harmonic(SpacePtr sp, int l, int m, cplx amp = 1.0) {
    SurfaceField f(std::move(sp));
    f.coeffs[sh_flat_index(l, m)] = amp;
    return f;
  }

  Eigen::VectorXcd nodal() const { return mul_rc(space->surface.Y, coeffs); }
  static SurfaceField from_nodal(const SpacePtr& sp, const Eigen::VectorXcd& values) {
    Eigen::VectorXcd wv = values.cwiseProduct(sp->surface.weights.cast<cplx>());
    SurfaceField f(sp);
    f.coeffs.real() = sp->surface.Y.transpose() * wv.real();
    f.coeffs.imag() = sp->surface.Y.transpose() * wv.imag();
    return f;
  }

  double l2_norm() const { return space->geometry.outer_radius * coeffs.norm(); }
  double h1_norm() const {
    double b2 = space->geometry.outer_radius * space->geometry.outer_radius;
    double acc = 0.0;
    for (int i = 0; i < coeffs.size(); ++i) {
      double l = space->mode_l[i];
      acc += (b2 + l * (l + 1)) * std::norm(coeffs[i]);
    }
    return std::sqrt(acc);
  }
  bool is_real(double tol = 0.0) const { return coeffs.imag().cwiseAbs().maxCoeff() <= tol; }

  SurfaceField& operator+=(const SurfaceField& o) {
    require_same_space(space, o.space, "surface field sum");
    coeffs += o.coeffs;
    return *this;
  }
  SurfaceField& operator-=(const SurfaceField& o) {
    require_same_space(space, o.space, "surface field difference");
    coeffs -= o.coeffs;
    return *this;
  }
  SurfaceField& operator*=(cplx a) { coeffs *= a; return *this; }

  friend SurfaceField operator+(SurfaceField x, const SurfaceField& y) { return x += y; }
  friend SurfaceField operator-(SurfaceField x, const SurfaceField& y) { return x -= y; }
  friend SurfaceField operator*(cplx a, SurfaceField x) { return x *= a; }
};

/// integral over Gamma1; exact for band-limited fields.
inline cplx integrate_surface(const SurfaceField& f) {
  double b = f.space->geometry.outer_radius;
  return b * b * std::sqrt(4.0 * M_PI) * f.coeffs[0];
}

/// L^2(Gamma1) pairing, conjugate on the first argument.
inline cplx inner_surface(const SurfaceField& f, const SurfaceField& g) {
  require_same_space(f.space, g.space, "surface inner product");
  double b = f.space->geometry.outer_radius;
  return b * b * f.coeffs.dot(g.coeffs);  // Eigen dot conjugates the lhs
}

/// Scalar function on Omega: per-(l,m) radial samples on the Gauss grid,
/// understood as the degree-(n_r-1) interpolant in r.
struct ScalarBulkField {
  SpacePtr space;
  Eigen::MatrixXcd data;  // (n_modes x n_r)

  ScalarBulkField() = default;
  explicit ScalarBulkField(SpacePtr sp)
      : space(std::move(sp)),
        data(Eigen::MatrixXcd::Zero(space->n_modes, space->n_r)) {}

  static ScalarBulkField zero(SpacePtr sp) { return ScalarBulkField(std::move(sp)); }
  static ScalarBulkField constant(SpacePtr sp, cplx value) {
    ScalarBulkField f(std::move(sp));
    f.data.row(0).setConstant(value * std::sqrt(4.0 * M_PI));
    return f;
  }
  /// f = profile(r) * Y_{l,m}
  static ScalarBulkField mode(const SpacePtr& sp, int l, int m, const Eigen::VectorXcd& profile) {
    ScalarBulkField f(sp);
    f.data.row(sh_flat_index(l, m)) = profile.transpose();
    return f;
  }

  ScalarBulkField& operator+=(const ScalarBulkField& o) {
    require_same_space(space, o.space, "bulk field sum");
    data += o.data;
    return *this;
  }
  ScalarBulkField& operator-=(const ScalarBulkField& o) {
    require_same_space(space, o.space, "bulk field difference");
    data -= o.data;
    return *this;
  }
  ScalarBulkField& operator*=(cplx a) { data *= a; return *this; }
  friend ScalarBulkField operator+(ScalarBulkField x, const ScalarBulkField& y) { return x += y; }
  friend ScalarBulkField operator-(ScalarBulkField x, const ScalarBulkField& y) { return x -= y; }
  friend ScalarBulkField operator*(cplx a, ScalarBulkField x) { return x *= a; }

  /// Radial derivative of every mode (interpolant-exact).
  Eigen::MatrixXcd radial_derivative() const { return mul_cr(data, space->D.transpose()); }

  /// Trace of the field on the sphere of radius b (value, not flux).
  SurfaceField trace_gamma1() const {
    return SurfaceField(space, mul_cr_vec(data, space->eval_b));
  }

  double l2_norm() const {
    double acc = 0.0;
    for (int j = 0; j < space->n_r; ++j)
      acc += space->radial_weights[j] * data.col(j).squaredNorm();
    return std::sqrt(acc);
  }

  /// H^1(Omega) seminorm of f = sum u_lm(r) Y_lm.
  double h1_seminorm() const {
    Eigen::MatrixXcd du = radial_derivative();
    double acc = 0.0;
    for (int i = 0; i < space->n_modes; ++i) {
      double ll1 = space->mode_l[i] * (space->mode_l[i] + 1.0);
      for (int j = 0; j < space->n_r; ++j)
        acc += space->radial_weights[j] * std::norm(du(i, j)) +
               ll1 * space->gl_weights[j] * std::norm(data(i, j));
    }
    return std::sqrt(acc);
  }
};

/// integral over Omega via the (0,0) mode.
inline cplx integrate_volume(const ScalarBulkField& f) {
  cplx acc = 0.0;
  for (int j = 0; j < f.space->n_r; ++j) acc += f.space->radial_weights[j] * f.data(0, j);
  return std::sqrt(4.0 * M_PI) * acc;
}

inline cplx inner_volume(const ScalarBulkField& f, const ScalarBulkField& g) {
  require_same_space(f.space, g.space, "volume inner product");
  cplx acc = 0.0;
  for (int j = 0; j < f.space->n_r; ++j)
    acc += f.space->radial_weights[j] * f.data.col(j).dot(g.data.col(j));
  return acc;
}

/// Divergence-free tangential field T = curl(t x), t = sum t_lm(r) Y_lm,
/// with the l=0 component gauged away (it does not contribute to T).
struct ToroidalField {
  SpacePtr space;
  Eigen::MatrixXcd t;  // (n_modes x n_r); row block l=0 kept identically zero

  ToroidalField() = default;
  explicit ToroidalField(SpacePtr sp)
      : space(std::move(sp)), t(Eigen::MatrixXcd::Zero(space->n_modes, space->n_r)) {}

  static ToroidalField zero(SpacePtr sp) { return ToroidalField(std::move(sp)); }
  static ToroidalField mode(const SpacePtr& sp, int l, int m, const Eigen::VectorXcd& profile) {
    if (l < 1) throw std::invalid_argument("toroidal field: generating modes need l >= 1");
    ToroidalField f(sp);
    f.t.row(sh_flat_index(l, m)) = profile.transpose();
    return f;
  }

  void enforce_gauge() { t.row(0).setZero(); }

  ToroidalField& operator+=(const ToroidalField& o) {
    require_same_space(space, o.space, "toroidal sum");
    t += o.t;
    return *this;
  }
  ToroidalField& operator-=(const ToroidalField& o) {
    require_same_space(space, o.space, "toroidal difference");
    t -= o.t;
    return *this;
  }
  ToroidalField& operator*=(cplx a) { t *= a; return *this; }
  friend ToroidalField operator+(ToroidalField x, const ToroidalField& y) { return x += y; }
  friend ToroidalField operator-(ToroidalField x, const ToroidalField& y) { return x -= y; }
  friend ToroidalField operator*(cplx a, ToroidalField x) { return x *= a; }

  double l2_norm() const {
    double acc = 0.0;
    for (int i = 0; i < space->n_modes; ++i) {
      double ll1 = space->mode_l[i] * (space->mode_l[i] + 1.0);
      if (ll1 == 0.0) continue;
      for (int j = 0; j < space->n_r; ++j)
        acc += ll1 * space->radial_weights[j] * std::norm(t(i, j));
    }
    return std::sqrt(acc);
  }
};

inline cplx inner_toroidal(const ToroidalField& f, const ToroidalField& g) {
  require_same_space(f.space, g.space, "toroidal inner product");
  cplx acc = 0.0;
  for (int i = 0; i < f.space->n_modes; ++i) {
    double ll1 = f.space->mode_l[i] * (f.space->mode_l[i] + 1.0);
    if (ll1 == 0.0) continue;
    for (int j = 0; j < f.space->n_r; ++j)
      acc += ll1 * f.space->radial_weights[j] * std::conj(f.t(i, j)) * g.t(i, j);
  }
  return acc;
}

enum class BoundaryPart { Gamma0, Gamma1 };

/// Vector field on Omega, stored as gradient-of-potential plus toroidal
/// part.  Gradient fields carry the full curl-free sector; the toroidal
/// part carries the solenoidal tangential sector, so div, curl and the
/// normal traces are all available in closed form.
struct VectorField {
  ScalarBulkField potential;
  ToroidalField toroidal;

  VectorField() = default;
  explicit VectorField(SpacePtr sp) : potential(sp), toroidal(std::move(sp)) {}
  VectorField(ScalarBulkField phi, ToroidalField tor)
      : potential(std::move(phi)), toroidal(std::move(tor)) {
    require_same_space(potential.space, toroidal.space, "vector field");
    toroidal.enforce_gauge();
  }

  const SpacePtr& space() const { return potential.space; }

  static VectorField zero(SpacePtr sp) { return VectorField(std::move(sp)); }
  static VectorField gradient(ScalarBulkField phi) {
    ToroidalField t(phi.space);
    return VectorField(std::move(phi), std::move(t));
  }
  static VectorField from_toroidal(ToroidalField t) {
    ScalarBulkField phi(t.space);
    return VectorField(std::move(phi), std::move(t));
  }

  bool curl_free(double tol = 0.0) const { return toroidal.l2_norm() <= tol; }

  VectorField& operator+=(const VectorField& o) {
    potential += o.potential;
    toroidal += o.toroidal;
    return *this;
  }
  VectorField& operator-=(const VectorField& o) {
    potential -= o.potential;
    toroidal -= o.toroidal;
    return *this;
  }
  VectorField& operator*=(cplx a) {
    potential *= a;
    toroidal *= a;
    return *this;
  }
  friend VectorField operator+(VectorField x, const VectorField& y) { return x += y; }
  friend VectorField operator-(VectorField x, const VectorField& y) { return x -= y; }
  friend VectorField operator*(cplx a, VectorField x) { return x *= a; }

  double l2_norm() const {
    double g2 = 0.0;
    {
      Eigen::MatrixXcd du = potential.radial_derivative();
      const auto& sp = *potential.space;
      for (int i = 0; i < sp.n_modes; ++i) {
        double ll1 = sp.mode_l[i] * (sp.mode_l[i] + 1.0);
        for (int j = 0; j < sp.n_r; ++j)
          g2 += sp.radial_weights[j] * std::norm(du(i, j)) +
                ll1 * sp.gl_weights[j] * std::norm(potential.data(i, j));
      }
    }
    double t = toroidal.l2_norm();
    return std::sqrt(g2 + t * t);
  }
};

/// div s = Laplacian of the potential part; the toroidal part is
/// solenoidal by construction.
inline ScalarBulkField divergence(const VectorField& s) {
  const auto& sp = *s.space();
  Eigen::MatrixXcd du = s.potential.radial_derivative();
  Eigen::MatrixXcd d2u = mul_cr(du, sp.D.transpose());
  ScalarBulkField out(s.space());
  for (int i = 0; i < sp.n_modes; ++i) {
    double ll1 = sp.mode_l[i] * (sp.mode_l[i] + 1.0);
    for (int j = 0; j < sp.n_r; ++j) {
      double r = sp.radial_nodes[j];
      out.data(i, j) = d2u(i, j) + 2.0 / r * du(i, j) - ll1 / (r * r) * s.potential.data(i, j);
    }
  }
  return out;
}

/// s . nu on the requested boundary sphere (nu = outward normal of Omega,
/// so on Gamma0 it points toward the center).  Toroidal parts are tangent
/// and contribute nothing.
inline SurfaceField normal_trace(const VectorField& s, BoundaryPart which) {
  const auto& sp = *s.space();
  if (which == BoundaryPart::Gamma0) {
    if (!sp.geometry.has_gamma0())
      throw std::invalid_argument("normal_trace: Gamma0 requested on a ball geometry");
    return SurfaceField(s.space(), -mul_cr_vec(s.potential.data, sp.deriv_a));
  }
  return SurfaceField(s.space(), mul_cr_vec(s.potential.data, sp.deriv_b));
}

/// L^2(Omega)^3 pairing; the gradient and toroidal sectors are orthogonal.
inline cplx inner_vector(const VectorField& f, const VectorField& g) {
  require_same_space(f.space(), g.space(), "vector inner product");
  const auto& sp = *f.space();
  Eigen::MatrixXcd dfp = f.potential.radial_derivative();
  Eigen::MatrixXcd dgp = g.potential.radial_derivative();
  cplx acc = 0.0;
  for (int i = 0; i < sp.n_modes; ++i) {
    double ll1 = sp.mode_l[i] * (sp.mode_l[i] + 1.0);
    for (int j = 0; j < sp.n_r; ++j)
      acc += sp.radial_weights[j] * std::conj(dfp(i, j)) * dgp(i, j) +
             ll1 * sp.gl_weights[j] * std::conj(f.potential.data(i, j)) * g.potential.data(i, j);
  }
  return acc + inner_toroidal(f.toroidal, g.toroidal);
}

}  // namespace acousto
