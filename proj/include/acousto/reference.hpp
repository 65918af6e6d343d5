#pragma once

#include "acousto/coefficients.hpp"
#include "acousto/states.hpp"

namespace acousto {

/// Dense reference propagator: assembles the full semi-discrete first-order
/// system as one matrix (by direct quadrature sums, separate from the
/// engine's blocked operator application) and advances it with the
/// classical fourth-order Runge-Kutta method.  Guarded to desk sizes.
class ReferenceIntegrator {
 public:
  explicit ReferenceIntegrator(const Coefficients& coeffs) : sp_(coeffs.space()) {
    const auto& sp = *sp_;
    if (sp.l_max > 4 || sp.n_r > 32)
      throw std::invalid_argument("reference integrator: size guard l_max <= 4, n_r <= 32 exceeded");
    const int nm = sp.n_modes, N = sp.n_r;
    const int S = nm * N + nm;
    const double rho0 = coeffs.rho0, B = coeffs.bulk_modulus;
    const double b2 = sp.geometry.outer_radius * sp.geometry.outer_radius;
    const auto& rule = sp.surface;

    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(S, S);
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(S, S);
    Eigen::MatrixXd GD = Eigen::MatrixXd::Zero(S, S);

    Eigen::VectorXd mu_n = nodal_values(rule, coeffs.mu);
    Eigen::VectorXd sig_n = nodal_values(rule, coeffs.sigma);
    Eigen::VectorXd del_n = nodal_values(rule, coeffs.delta);
    Eigen::VectorXd kap_n = nodal_values(rule, coeffs.kappa);

    for (int i = 0; i < nm; ++i) {
      int l = sp.mode_l[i];
      int o = i * N;
      for (int j = 0; j < N; ++j) M(o + j, o + j) = rho0 * rho0 / B * sp.radial_weights[j];
      // int u' w' r^2 + l(l+1) int u w, assembled node by node
      for (int a = 0; a < N; ++a)
        for (int c = 0; c < N; ++c) {
          double acc = 0.0;
          for (int j = 0; j < N; ++j)
            acc += sp.radial_weights[j] * sp.D(j, a) * sp.D(j, c);
          acc += l * (l + 1.0) * ((a == c) ? sp.gl_weights[a] : 0.0);
          K(o + a, o + c) = rho0 * acc;
        }
      int vi = nm * N + i;
      for (int j = 0; j < N; ++j) {
        GD(o + j, vi) = -rho0 * b2 * sp.eval_b[j];
        GD(vi, o + j) = rho0 * b2 * sp.eval_b[j];
      }
    }
    for (int i = 0; i < nm; ++i)
      for (int k = 0; k < nm; ++k) {
        double m_acc = 0.0, k_acc = 0.0, d_acc = 0.0;
        for (int s = 0; s < rule.weights.size(); ++s) {
          double yy = rule.Y(s, i) * rule.Y(s, k);
          double gg = rule.Yth(s, i) * rule.Yth(s, k) + rule.Yphs(s, i) * rule.Yphs(s, k);
          m_acc += rule.weights[s] * mu_n[s] * yy;
          k_acc += rule.weights[s] * (sig_n[s] * gg + b2 * kap_n[s] * yy);
          d_acc += rule.weights[s] * del_n[s] * yy;
        }
        M(nm * N + i, nm * N + k) = b2 * m_acc;
        K(nm * N + i, nm * N + k) = k_acc;
        GD(nm * N + i, nm * N + k) += b2 * d_acc;
      }

    Eigen::LLT<Eigen::MatrixXd> mllt(M);
    A_ = Eigen::MatrixXd::Zero(2 * S, 2 * S);
    A_.topRightCorner(S, S).setIdentity();
    A_.bottomLeftCorner(S, S) = -mllt.solve(K);
    A_.bottomRightCorner(S, S) = -mllt.solve(GD);
    size_ = S;
  }

  const Eigen::MatrixXd& system_matrix() const { return A_; }

  Eigen::VectorXcd flatten(const PotentialState& st) const {
    const auto& sp = *sp_;
    const int nm = sp.n_modes, N = sp.n_r, S = size_;
    Eigen::VectorXcd x(2 * S);
    for (int i = 0; i < nm; ++i) {
      x.segment(i * N, N) = st.u.data.row(i).transpose();
      x.segment(S + i * N, N) = st.u_t.data.row(i).transpose();
    }
    x.segment(nm * N, nm) = st.v.coeffs;
    x.segment(S + nm * N, nm) = st.v_t.coeffs;
    return x;
  }

  PotentialState unflatten(const Eigen::VectorXcd& x, double t) const {
    const auto& sp = *sp_;
    const int nm = sp.n_modes, N = sp.n_r, S = size_;
    PotentialState st = PotentialState::zero(sp_);
    for (int i = 0; i < nm; ++i) {
      st.u.data.row(i) = x.segment(i * N, N).transpose();
      st.u_t.data.row(i) = x.segment(S + i * N, N).transpose();
    }
    st.v.coeffs = x.segment(nm * N, nm);
    st.v_t.coeffs = x.segment(S + nm * N, nm);
    st.t = t;
    return st;
  }

  PotentialState propagate(const PotentialState& init, double T, double dt_ref = 1e-5) const {
    Eigen::VectorXcd x = flatten(init);
    long n = std::lround(T / dt_ref);
    auto apply = [this](const Eigen::VectorXcd& y) {
      Eigen::VectorXcd out(y.size());
      out.real() = A_ * y.real();
      out.imag() = A_ * y.imag();
      return out;
    };
    for (long k = 0; k < n; ++k) {
      Eigen::VectorXcd k1 = apply(x);
      Eigen::VectorXcd k2 = apply(x + (0.5 * dt_ref) * k1);
      Eigen::VectorXcd k3 = apply(x + (0.5 * dt_ref) * k2);
      Eigen::VectorXcd k4 = apply(x + dt_ref * k3);
      x += (dt_ref / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return unflatten(x, init.t + n * dt_ref);
  }

 private:
  SpacePtr sp_;
  Eigen::MatrixXd A_;
  int size_ = 0;
};

inline PotentialState reference_oracle(const Coefficients& coeffs, const PotentialState& init,
                                       double T, double dt_ref = 1e-5) {
  return ReferenceIntegrator(coeffs).propagate(init, T, dt_ref);
}

}  // namespace acousto
