#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "acousto/coefficients.hpp"

namespace acousto {

/// Spherical Bessel j_l(z) for complex argument: power series near the
/// origin, upward recurrence away from it (stable for |z| > l).
inline cplx spherical_jl(int l, cplx z) {
  double az = std::abs(z);
  if (az < std::max(2.0, 1.5 * l)) {
    // j_l(z) = z^l / (2l+1)!! * sum_k t_k,  t_0 = 1,
    // t_{k+1} = t_k * (-z^2/2) / ((k+1)(2l+2k+3))
    cplx term = 1.0, sum = 1.0;
    cplx z2 = -0.5 * z * z;
    for (int k = 0; k < 60; ++k) {
      term *= z2 / ((k + 1.0) * (2.0 * l + 2.0 * k + 3.0));
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    cplx zl = 1.0;
    for (int k = 0; k < l; ++k) zl *= z;
    double dfact = 1.0;
    for (int k = 1; k <= 2 * l + 1; k += 2) dfact *= k;
    return zl / dfact * sum;
  }
  cplx j0 = std::sin(z) / z;
  if (l == 0) return j0;
  cplx j1 = std::sin(z) / (z * z) - std::cos(z) / z;
  if (l == 1) return j1;
  cplx jm = j0, jc = j1;
  for (int k = 1; k < l; ++k) {
    cplx jn = (2.0 * k + 1.0) / z * jc - jm;
    jm = jc;
    jc = jn;
  }
  return jc;
}

inline cplx spherical_jl_prime(int l, cplx z) {
  if (l == 0) return -spherical_jl(1, z);
  return spherical_jl(l - 1, z) - (l + 1.0) / z * spherical_jl(l, z);
}

/// Characteristic function of the time-harmonic ansatz e^{i w t} for one
/// angular degree l on the ball: radial solution j_l(k r), k = w
/// sqrt(rho0/B), with the flux and membrane rows eliminated:
///   (-mu w^2 + sigma l(l+1)/b^2 + i w delta + kappa) k j_l'(k b)
///     - rho0 w^2 j_l(k b) = 0.
struct DispersionProblem {
  double rho0, B, mu, sigma, delta, kappa, b;
  int l;

  cplx characteristic(cplx w) const {
    cplx k = w * std::sqrt(rho0 / B);
    cplx x = k * b;
    cplx memb = -mu * w * w + sigma * l * (l + 1.0) / (b * b) + cplx(0.0, 1.0) * w * delta + kappa;
    return memb * k * spherical_jl_prime(l, x) - rho0 * w * w * spherical_jl(l, x);
  }

  /// characteristic with the trivial root at w = 0 divided out
  cplx normalized(cplx w) const {
    int order = (l == 0) ? 2 : l;
    cplx e = 1.0;
    for (int k = 0; k < order; ++k) e *= w;
    return characteristic(w) / e;
  }

  double residual_scale(cplx w) const {
    cplx k = w * std::sqrt(rho0 / B);
    cplx x = k * b;
    cplx memb = -mu * w * w + sigma * l * (l + 1.0) / (b * b) + cplx(0.0, 1.0) * w * delta + kappa;
    return std::abs(memb * k * spherical_jl_prime(l, x)) +
           std::abs(rho0 * w * w * spherical_jl(l, x));
  }
};

namespace detail {

/// Winding number of f around a rectangle, with adaptive refinement of the
/// phase sampling.
inline double winding_number(const std::function<cplx(cplx)>& f, cplx lo, cplx hi) {
  std::vector<cplx> corners = {lo, cplx(hi.real(), lo.imag()), hi, cplx(lo.real(), hi.imag()), lo};
  double total = 0.0;
  for (int side = 0; side < 4; ++side) {
    cplx a = corners[side], b = corners[side + 1];
    std::function<double(cplx, cplx, cplx, cplx, int)> seg =
        [&](cplx za, cplx zb, cplx fa, cplx fb, int depth) -> double {
      double d = std::arg(fb / fa);
      if (std::abs(d) < M_PI / 2 || depth > 40) return d;
      cplx zm = 0.5 * (za + zb);
      cplx fm = f(zm);
      return seg(za, zm, fa, fm, depth + 1) + seg(zm, zb, fm, fb, depth + 1);
    };
    const int n0 = 32;
    cplx fprev = f(a);
    for (int k = 1; k <= n0; ++k) {
      cplx z = a + (b - a) * (static_cast<double>(k) / n0);
      cplx fz = f(z);
      total += seg(a + (b - a) * (static_cast<double>(k - 1) / n0), z, fprev, fz, 0);
      fprev = fz;
    }
  }
  return total / (2.0 * M_PI);
}

inline void collect_roots(const DispersionProblem& dp, cplx lo, cplx hi, int depth,
                          std::vector<cplx>& out) {
  auto f = [&dp](cplx w) { return dp.normalized(w); };
  double wn = winding_number(f, lo, hi);
  long n = std::lround(wn);
  if (n <= 0) return;
  double w = hi.real() - lo.real(), h = hi.imag() - lo.imag();
  if (n == 1 && (w < 1e-3 && h < 1e-3)) {
    // Newton polish from the box center with a finite-difference derivative
    cplx z = 0.5 * (lo + hi);
    for (int it = 0; it < 60; ++it) {
      double step = 1e-7 * (1.0 + std::abs(z));
      cplx df = (f(z + step) - f(z - step)) / (2.0 * step);
      cplx dz = f(z) / df;
      z -= dz;
      if (std::abs(dz) < 1e-14 * (1.0 + std::abs(z))) break;
    }
    out.push_back(z);
    return;
  }
  if (depth > 60) return;
  if (w >= h) {
    double mid = 0.5 * (lo.real() + hi.real());
    collect_roots(dp, lo, cplx(mid, hi.imag()), depth + 1, out);
    collect_roots(dp, cplx(mid, lo.imag()), hi, depth + 1, out);
  } else {
    double mid = 0.5 * (lo.imag() + hi.imag());
    collect_roots(dp, lo, cplx(hi.real(), mid), depth + 1, out);
    collect_roots(dp, cplx(lo.real(), mid), hi, depth + 1, out);
  }
}

}  // namespace detail

struct DispersionWindow {
  double re_min = 0.05;
  double re_max = 12.0;
  double im_min = -1.0;
  double im_max = 4.0;
};

/// Roots of the per-l characteristic equation inside the window (positive
/// real-part representatives), sorted by |Im| (least damped first).  The
/// window is widened automatically if it contains no root.
inline std::vector<cplx> dispersion_roots(const Coefficients& coeffs, const Geometry& geometry,
                                          int l, DispersionWindow win = {}) {
  if (geometry.has_gamma0())
    throw std::invalid_argument("dispersion roots: ball geometry required");
  const auto& sp = *coeffs.space();
  for (const SurfaceField* f : {&coeffs.mu, &coeffs.sigma, &coeffs.delta, &coeffs.kappa})
    if (sp.n_modes > 1 && f->coeffs.tail(sp.n_modes - 1).cwiseAbs().maxCoeff() != 0.0)
      throw std::invalid_argument("dispersion roots: constant coefficients required");
  const double s4pi = std::sqrt(4.0 * M_PI);
  DispersionProblem dp{coeffs.rho0,
                       coeffs.bulk_modulus,
                       std::real(coeffs.mu.coeffs[0]) / s4pi,
                       std::real(coeffs.sigma.coeffs[0]) / s4pi,
                       std::real(coeffs.delta.coeffs[0]) / s4pi,
                       std::real(coeffs.kappa.coeffs[0]) / s4pi,
                       geometry.outer_radius,
                       l};
  std::vector<cplx> roots;
  for (int widen = 0; widen < 4 && roots.empty(); ++widen) {
    detail::collect_roots(dp, cplx(win.re_min, win.im_min), cplx(win.re_max, win.im_max), 0,
                          roots);
    if (roots.empty()) {
      win.re_max *= 2.0;
      win.im_min *= 2.0;
      win.im_max *= 2.0;
    }
  }
  // validate and de-duplicate
  std::vector<cplx> accepted;
  for (cplx z : roots) {
    if (std::abs(dp.characteristic(z)) > 1e-10 * std::max(dp.residual_scale(z), 1e-300)) continue;
    bool dup = false;
    for (cplx a : accepted)
      if (std::abs(a - z) < 1e-6 * (1.0 + std::abs(z))) dup = true;
    if (!dup) accepted.push_back(z);
  }
  std::sort(accepted.begin(), accepted.end(), [](cplx a, cplx b) {
    if (std::abs(a.imag()) != std::abs(b.imag())) return std::abs(a.imag()) < std::abs(b.imag());
    return a.real() < b.real();
  });
  return accepted;
}

}  // namespace acousto
