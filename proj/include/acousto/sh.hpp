#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace acousto {

/// Gauss-Legendre rule on [-1,1], computed by Newton iteration on P_n.
struct GaussLegendre {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;

  explicit GaussLegendre(int n) : nodes(n), weights(n) {
    if (n < 1) throw std::invalid_argument("GaussLegendre: n must be >= 1");
    for (int i = 0; i < n; ++i) {
      // Tricomi-style initial guess, then Newton on P_n.
      double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double p, dp;
      for (int it = 0; it < 100; ++it) {
        legendre_pair(n, x, p, dp);
        double dx = -p / dp;
        x += dx;
        if (std::abs(dx) < 1e-15) break;
      }
      legendre_pair(n, x, p, dp);
      x -= p / dp;
      legendre_pair(n, x, p, dp);
      nodes[n - 1 - i] = x;
      weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }

  /// P_n(x) and P_n'(x) by the three-term recurrence.
  static void legendre_pair(int n, double x, double& p, double& dp) {
    double p0 = 1.0, p1 = x;
    if (n == 0) { p = p0; dp = 0.0; return; }
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    p = p1;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
  }
};

/// Values of shifted/mapped Legendre polynomials P_0..P_{kmax} at x, with
/// first and second derivatives (in the x variable).
inline void legendre_all(int kmax, double x, Eigen::VectorXd& val,
                         Eigen::VectorXd& d1, Eigen::VectorXd& d2) {
  val.resize(kmax + 1);
  d1.resize(kmax + 1);
  d2.resize(kmax + 1);
  val[0] = 1.0; d1[0] = 0.0; d2[0] = 0.0;
  if (kmax == 0) return;
  val[1] = x; d1[1] = 1.0; d2[1] = 0.0;
  for (int k = 2; k <= kmax; ++k)
    val[k] = ((2 * k - 1) * x * val[k - 1] - (k - 1) * val[k - 2]) / k;
  for (int k = 2; k <= kmax; ++k) {
    if (std::abs(x) < 1.0) {
      d1[k] = k * (val[k - 1] - x * val[k]) / (1.0 - x * x);
      d2[k] = (2.0 * x * d1[k] - k * (k + 1) * val[k]) / (1.0 - x * x);
    } else {
      // endpoint closed forms
      double s = (x > 0) ? 1.0 : ((k % 2 == 0) ? -1.0 : 1.0);
      d1[k] = s * k * (k + 1) / 2.0;
      double s2 = (x > 0) ? 1.0 : ((k % 2 == 0) ? 1.0 : -1.0);
      d2[k] = s2 * (k - 1) * k * (k + 1) * (k + 2) / 8.0;
    }
  }
}

/// Flat index of the real spherical harmonic Y_{l,m}: i = l^2 + l + m.
inline int sh_flat_index(int l, int m) { return l * l + l + m; }

inline std::pair<int, int> sh_degree_order(int idx) {
  int l = static_cast<int>(std::floor(std::sqrt(static_cast<double>(idx)) + 1e-12));
  while ((l + 1) * (l + 1) <= idx) ++l;
  while (l * l > idx) --l;
  return {l, idx - l * l - l};
}

inline int sh_count(int l_max) { return (l_max + 1) * (l_max + 1); }

namespace detail {

/// Normalized associated Legendre functions Q_{l,m}(theta) with
/// ∫_0^π Q_{l,m}^2 sinθ dθ = 1/(2π), plus dQ/dθ.  The real orthonormal
/// harmonics are Y_{l,0} = Q_{l,0}, Y_{l,±m} = √2 Q_{l,m} {cos,sin}(mφ).
inline void normalized_plm(int l_max, double theta,
                           Eigen::MatrixXd& Q, Eigen::MatrixXd& dQ) {
  const double x = std::cos(theta);
  const double s = std::sin(theta);
  Q.setZero(l_max + 1, l_max + 1);
  dQ.setZero(l_max + 1, l_max + 1);
  Q(0, 0) = 1.0 / std::sqrt(4.0 * M_PI);
  for (int m = 1; m <= l_max; ++m)
    Q(m, m) = s * std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * Q(m - 1, m - 1);
  for (int m = 0; m < l_max; ++m)
    Q(m + 1, m) = x * std::sqrt(2.0 * m + 3.0) * Q(m, m);
  for (int m = 0; m <= l_max; ++m) {
    for (int l = m + 2; l <= l_max; ++l) {
      double a = std::sqrt(((2.0 * l - 1.0) * (2.0 * l + 1.0)) /
                           ((l - m) * static_cast<double>(l + m)));
      double b = std::sqrt(((2.0 * l + 1.0) * (l - 1.0 - m) * (l - 1.0 + m)) /
                           ((2.0 * l - 3.0) * (l - m) * static_cast<double>(l + m)));
      Q(l, m) = a * x * Q(l - 1, m) - b * Q(l - 2, m);
    }
  }
  // dQ/dθ = (1/sinθ)[ l cosθ Q_{l,m} − sqrt((2l+1)/(2l−1) (l²−m²)) Q_{l−1,m} ]
  for (int m = 0; m <= l_max; ++m) {
    for (int l = m; l <= l_max; ++l) {
      double lower = (l > m)
          ? std::sqrt((2.0 * l + 1.0) / (2.0 * l - 1.0) *
                      (static_cast<double>(l) * l - static_cast<double>(m) * m)) *
                Q(l - 1, m)
          : 0.0;
      dQ(l, m) = (l * x * Q(l, m) - lower) / s;
    }
  }
}

}  // namespace detail

/// Real orthonormal spherical harmonics evaluated at one point, together
/// with the tangential derivative ingredients ∂θY and (1/sinθ)∂φY.
inline void sh_eval_point(int l_max, double theta, double phi,
                          Eigen::VectorXd& y, Eigen::VectorXd& dy_dtheta,
                          Eigen::VectorXd& dy_dphi_over_sin) {
  Eigen::MatrixXd Q, dQ;
  detail::normalized_plm(l_max, theta, Q, dQ);
  const int n = sh_count(l_max);
  const double s = std::sin(theta);
  y.resize(n);
  dy_dtheta.resize(n);
  dy_dphi_over_sin.resize(n);
  const double r2 = std::sqrt(2.0);
  for (int l = 0; l <= l_max; ++l) {
    y[sh_flat_index(l, 0)] = Q(l, 0);
    dy_dtheta[sh_flat_index(l, 0)] = dQ(l, 0);
    dy_dphi_over_sin[sh_flat_index(l, 0)] = 0.0;
    for (int m = 1; m <= l; ++m) {
      double c = std::cos(m * phi), sn = std::sin(m * phi);
      int ip = sh_flat_index(l, m), im = sh_flat_index(l, -m);
      y[ip] = r2 * Q(l, m) * c;
      y[im] = r2 * Q(l, m) * sn;
      dy_dtheta[ip] = r2 * dQ(l, m) * c;
      dy_dtheta[im] = r2 * dQ(l, m) * sn;
      dy_dphi_over_sin[ip] = -m * r2 * Q(l, m) * sn / s;
      dy_dphi_over_sin[im] = m * r2 * Q(l, m) * c / s;
    }
  }
}

}  // namespace acousto
