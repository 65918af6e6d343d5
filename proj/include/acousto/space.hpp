#pragma once

#include <cmath>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "acousto/sh.hpp"

namespace acousto {

/// Domain descriptor: the open ball of radius b, or the spherical shell
/// a < |x| < b.  Gamma1 is always the outer sphere; Gamma0 is the inner
/// sphere (shell only).
struct Geometry {
  enum class Kind { Ball, Shell };
  Kind kind = Kind::Ball;
  double inner_radius = 0.0;  // a (shell only)
  double outer_radius = 1.0;  // b

  static Geometry ball(double b) {
    if (!(b > 0)) throw std::invalid_argument("geometry: outer radius must be positive");
    return Geometry{Kind::Ball, 0.0, b};
  }
  static Geometry shell(double a, double b) {
    if (!(a > 0) || !(b > a))
      throw std::invalid_argument("geometry: shell requires 0 < inner radius < outer radius");
    return Geometry{Kind::Shell, a, b};
  }

  bool has_gamma0() const { return kind == Kind::Shell; }
  double volume() const {
    double a3 = inner_radius * inner_radius * inner_radius;
    double b3 = outer_radius * outer_radius * outer_radius;
    return 4.0 * M_PI / 3.0 * (b3 - a3);
  }
  double area_gamma1() const { return 4.0 * M_PI * outer_radius * outer_radius; }
  double area_gamma0() const {
    return has_gamma0() ? 4.0 * M_PI * inner_radius * inner_radius : 0.0;
  }
};

/// Tensor quadrature on the unit sphere (Gauss-Legendre in cos(theta) x
/// trapezoid in phi) with tables of the real harmonics and their
/// tangential derivatives at the nodes.
struct SurfaceRule {
  int l_max = 0;
  int n_theta = 0, n_phi = 0;
  Eigen::VectorXd weights;            // integrates over S^2 (unit sphere)
  Eigen::MatrixXd Y;                  // (nodes x modes) values
  Eigen::MatrixXd Yth;                // d/dtheta
  Eigen::MatrixXd Yphs;               // (1/sin theta) d/dphi

  SurfaceRule() = default;
  SurfaceRule(int l_max_, int n_theta_, int n_phi_) : l_max(l_max_), n_theta(n_theta_), n_phi(n_phi_) {
    const int modes = sh_count(l_max);
    const int ns = n_theta * n_phi;
    GaussLegendre gl(n_theta);
    weights.resize(ns);
    Y.resize(ns, modes);
    Yth.resize(ns, modes);
    Yphs.resize(ns, modes);
    Eigen::VectorXd y, yt, yp;
    for (int it = 0; it < n_theta; ++it) {
      double theta = std::acos(gl.nodes[it]);
      double wt = gl.weights[it] * (2.0 * M_PI / n_phi);
      for (int ip = 0; ip < n_phi; ++ip) {
        double phi = 2.0 * M_PI * ip / n_phi;
        int s = it * n_phi + ip;
        sh_eval_point(l_max, theta, phi, y, yt, yp);
        weights[s] = wt;
        Y.row(s) = y.transpose();
        Yth.row(s) = yt.transpose();
        Yphs.row(s) = yp.transpose();
      }
    }
  }

  static SurfaceRule standard(int l_max) {
    return SurfaceRule(l_max, 2 * (l_max + 1), 2 * l_max + 2);
  }
};

/// The discretization carrier: truncated real spherical-harmonic basis on
/// the outer sphere and a cell-centered Gauss-Legendre radial grid on
/// (a,b).  All derivative operators act on the degree-(n_r-1) polynomial
/// interpolant through the radial nodes, so traces, quadrature and the
/// divergence theorem are exact for represented fields.
class DiscreteSpace {
 public:
  Geometry geometry;
  int l_max = 0;
  int n_r = 0;
  int n_modes = 0;

  Eigen::VectorXd radial_nodes;    // r_j in (a,b), increasing
  Eigen::VectorXd gl_weights;      // plain GL weights on (a,b)
  Eigen::VectorXd radial_weights;  // gl_weights * r^2
  Eigen::MatrixXd D;               // nodal differentiation matrix
  Eigen::VectorXd eval_b, deriv_b; // interpolant value / derivative at r=b
  Eigen::VectorXd eval_a, deriv_a; // same at r=a (shell)
  Eigen::VectorXi mode_l, mode_m;  // degree/order per flat mode index

  SurfaceRule surface;

  DiscreteSpace(Geometry g, int l_max_, int n_r_)
      : geometry(g), l_max(l_max_), n_r(n_r_), n_modes(sh_count(l_max_)) {
    if (l_max < 0) throw std::invalid_argument("truncation: l_max must be >= 0");
    if (n_r < 4) throw std::invalid_argument("truncation: n_r must be >= 4");
    if (n_r < l_max + 4)
      throw std::invalid_argument("truncation: n_r must be at least l_max + 4");
    const double a = geometry.inner_radius, b = geometry.outer_radius;
    GaussLegendre gl(n_r);
    radial_nodes.resize(n_r);
    gl_weights.resize(n_r);
    for (int j = 0; j < n_r; ++j) {
      radial_nodes[j] = 0.5 * (b - a) * gl.nodes[j] + 0.5 * (a + b);
      gl_weights[j] = 0.5 * (b - a) * gl.weights[j];
    }
    radial_weights = gl_weights.cwiseProduct(radial_nodes.cwiseAbs2());

    build_barycentric();

    surface = SurfaceRule::standard(l_max);

    mode_l.resize(n_modes);
    mode_m.resize(n_modes);
    for (int l = 0; l <= l_max; ++l)
      for (int m = -l; m <= l; ++m) {
        mode_l[sh_flat_index(l, m)] = l;
        mode_m[sh_flat_index(l, m)] = m;
      }
  }

  DiscreteSpace(const DiscreteSpace&) = delete;
  DiscreteSpace& operator=(const DiscreteSpace&) = delete;

  /// Interpolant evaluation weights at an arbitrary point t (not a node).
  Eigen::VectorXd evaluation_row(double t) const {
    Eigen::VectorXd row(n_r);
    double denom = 0.0;
    for (int j = 0; j < n_r; ++j) {
      double c = bary_w_[j] / (t - radial_nodes[j]);
      row[j] = c;
      denom += c;
    }
    return row / denom;
  }

  // Opaque per-space caches (elliptic factorizations), built on first use.
  mutable std::shared_ptr<const void> elliptic_cache;
  mutable std::once_flag elliptic_once;

 private:
  Eigen::VectorXd bary_w_;

  void build_barycentric() {
    const double a = geometry.inner_radius, b = geometry.outer_radius;
    const double scale = 4.0 / (b - a);
    bary_w_.resize(n_r);
    for (int j = 0; j < n_r; ++j) {
      double w = 1.0;
      for (int k = 0; k < n_r; ++k)
        if (k != j) w /= (radial_nodes[j] - radial_nodes[k]) * scale;
      bary_w_[j] = w;
    }
    D.resize(n_r, n_r);
    for (int i = 0; i < n_r; ++i) {
      double diag = 0.0;
      for (int j = 0; j < n_r; ++j) {
        if (i == j) continue;
        D(i, j) = (bary_w_[j] / bary_w_[i]) / (radial_nodes[i] - radial_nodes[j]);
        diag -= D(i, j);
      }
      D(i, i) = diag;
    }
    eval_b = evaluation_row(b);
    deriv_b = D.transpose() * eval_b;
    if (geometry.has_gamma0()) {
      eval_a = evaluation_row(a);
      deriv_a = D.transpose() * eval_a;
    } else {
      eval_a = Eigen::VectorXd::Zero(n_r);
      deriv_a = Eigen::VectorXd::Zero(n_r);
    }
  }
};

using SpacePtr = std::shared_ptr<const DiscreteSpace>;

inline SpacePtr make_space(Geometry g, int l_max, int n_r) {
  return std::make_shared<const DiscreteSpace>(g, l_max, n_r);
}

inline void require_same_space(const SpacePtr& x, const SpacePtr& y, const char* what) {
  if (x.get() != y.get())
    throw std::invalid_argument(std::string(what) + ": operands live on different discrete spaces");
}

}  // namespace acousto
