// Independent reference implementations used only by the tests. Written with
// explicit loops so they share no code path with the library.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "risrelay/channel_model.hpp"
#include "risrelay/precoding.hpp"

namespace oracle {

using risrelay::cd;
using risrelay::CMatrix;
using risrelay::CVector;

inline CMatrix random_matrix(std::mt19937_64& rng, int rows, int cols, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  CMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = scale * cd(g(rng), g(rng));
  return m;
}

inline CVector random_phases(std::mt19937_64& rng, int L) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  CVector v(L);
  for (int l = 0; l < L; ++l) v(l) = std::polar(1.0, u(rng));
  return v;
}

/// Unit-variance channel set with arbitrary dimensions.
inline risrelay::ChannelSet random_channels(std::mt19937_64& rng, int M, int N, int K, int L,
                                            double noise = 1.0) {
  risrelay::ChannelSet ch;
  ch.H_TR = random_matrix(rng, N, M);
  ch.H_TI = random_matrix(rng, L, M);
  ch.H_IR = random_matrix(rng, N, L);
  ch.h_T = random_matrix(rng, M, K, 0.3);
  ch.h_R = random_matrix(rng, N, K);
  ch.h_I = random_matrix(rng, L, K);
  ch.noise_power = noise;
  return ch;
}

/// h^H x by explicit summation.
inline cd inner(const CVector& h, const CVector& x) {
  cd acc = 0.0;
  for (int i = 0; i < h.size(); ++i) acc += std::conj(h(i)) * x(i);
  return acc;
}

/// Row vector h_I,k^H diag(theta) G + h_direct,k^H, as a column (conjugated).
inline CVector cascade(const CVector& h_I, const CVector& theta, const CMatrix& G,
                       const CVector& h_direct) {
  const int L = static_cast<int>(theta.size());
  const int T = static_cast<int>(G.cols());
  CVector out(T);
  for (int t = 0; t < T; ++t) {
    cd row = std::conj(h_direct(t));
    for (int l = 0; l < L; ++l) row += std::conj(h_I(l)) * theta(l) * G(l, t);
    out(t) = std::conj(row);
  }
  return out;
}

/// H_TR + H_IR diag(theta) H_TI entry by entry.
inline CMatrix cascaded_bs_relay(const risrelay::ChannelSet& ch, const CVector& theta) {
  CMatrix out(ch.N(), ch.M());
  for (int n = 0; n < ch.N(); ++n)
    for (int m = 0; m < ch.M(); ++m) {
      cd acc = ch.H_TR(n, m);
      for (int l = 0; l < ch.L(); ++l) acc += ch.H_IR(n, l) * theta(l) * ch.H_TI(l, m);
      out(n, m) = acc;
    }
  return out;
}

/// SINR of user k with received gains g_i = row^H p_i, interference summed by hand.
inline double sinr(const CVector& row, const CMatrix& P, double noise, int k, double extra = 0.0) {
  double interference = noise + extra;
  double desired = 0.0;
  for (int i = 0; i < P.cols(); ++i) {
    const double g = std::norm(inner(row, P.col(i)));
    if (i == k) desired = g;
    else interference += g;
  }
  return desired / interference;
}

/// log2 det(I + H W W^H H^H / noise) through the eigenvalues of H W W^H H^H.
inline double relay_rate_eigen(const CMatrix& H, const CMatrix& W, double noise) {
  const CMatrix A = H * W * W.adjoint() * H.adjoint();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(A);
  double r = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    r += std::log2(1.0 + std::max(0.0, es.eigenvalues()(i)) / noise);
  return r;
}

/// Tangent bound log2 det Z + (tr(Z^-1 A(v)) - N) / ln 2 evaluated directly.
inline double surrogate_bound(const risrelay::ChannelSet& ch, const CVector& expansion,
                              const CMatrix& W, const CVector& v) {
  const int N = ch.N();
  const CMatrix S = W * W.adjoint() / ch.noise_power;
  const CMatrix H0 = cascaded_bs_relay(ch, expansion);
  const CMatrix Z = CMatrix::Identity(N, N) + H0 * S * H0.adjoint();
  const CMatrix Hv = cascaded_bs_relay(ch, v);
  const CMatrix A = CMatrix::Identity(N, N) + Hv * S * Hv.adjoint();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(Z);
  double logdet = 0.0;
  for (int i = 0; i < N; ++i) logdet += std::log2(es.eigenvalues()(i));
  const double tr = (Z.inverse() * A).trace().real();
  return logdet + (tr - N) / std::numbers::ln2;
}

}  // namespace oracle
