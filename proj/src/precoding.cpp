// SPDX-License-Identifier: Apache-2.0

#include "risrelay/precoding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace risrelay {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double log2_det_hermitian(const CMatrix& A) {
  Eigen::LLT<CMatrix> llt(A);
  if (llt.info() != Eigen::Success) {
    // Fall back to the spectrum for numerically semi-definite inputs.
    Eigen::SelfAdjointEigenSolver<CMatrix> es(A, Eigen::EigenvaluesOnly);
    double acc = 0.0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
      acc += std::log2(std::max(es.eigenvalues()(i), std::numeric_limits<double>::min()));
    }
    return acc;
  }
  double acc = 0.0;
  const CMatrix& l = llt.matrixLLT();
  for (int i = 0; i < l.rows(); ++i) acc += std::log2(l(i, i).real());
  return 2.0 * acc;
}

// Element-wise unit-modulus projection; zero entries take the fallback phase.
CVector unit_modulus(const CVector& a, const CVector& fallback) {
  CVector out(a.size());
  for (int i = 0; i < a.size(); ++i) {
    const double mag = std::abs(a(i));
    out(i) = mag > 0.0 ? a(i) / mag : fallback(i);
  }
  return out;
}

void check_targets(const CMatrix& rows, std::span<const double> user_noise,
                   std::span<const double> targets) {
  const auto K = static_cast<std::size_t>(rows.cols());
  if (user_noise.size() != K || targets.size() != K) {
    throw DomainError("precoder: target/noise count does not match number of users");
  }
  for (std::size_t k = 0; k < K; ++k) {
    if (!(user_noise[k] > 0.0) || !std::isfinite(user_noise[k])) {
      throw DomainError("precoder: per-user noise must be positive and finite");
    }
    if (!(targets[k] >= 0.0) || !std::isfinite(targets[k])) {
      throw DomainError("precoder: SINR targets must be finite and non-negative");
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// PhaseVector

PhaseVector PhaseVector::identity(int L) {
  PhaseVector p;
  p.v = CVector::Ones(L);
  return p;
}

PhaseVector PhaseVector::from_angles(std::span<const double> angles) {
  PhaseVector p;
  p.v.resize(static_cast<Eigen::Index>(angles.size()));
  for (std::size_t i = 0; i < angles.size(); ++i) {
    p.v(static_cast<Eigen::Index>(i)) = std::polar(1.0, angles[i]);
  }
  return p;
}

CVector PhaseVector::lifted() const {
  CVector out(v.size() + 1);
  out.head(v.size()) = v;
  out(v.size()) = t;
  return out;
}

PhaseVector PhaseVector::from_lifted(const CVector& lifted) {
  PhaseVector p;
  const auto L = lifted.size() - 1;
  p.v = lifted.head(L);
  p.t = lifted(L);
  return p;
}

PhaseVector PhaseVector::normalized() const {
  PhaseVector p;
  p.v = reflection();
  return p;
}

CVector PhaseVector::reflection() const {
  const cd scale = std::conj(t) / std::abs(t);
  CVector out = v * scale;
  for (int i = 0; i < out.size(); ++i) out(i) /= std::abs(out(i));
  return out;
}

bool is_unit_modulus(const CVector& v, double tol) {
  for (int i = 0; i < v.size(); ++i) {
    if (std::abs(std::abs(v(i)) - 1.0) > tol) return false;
  }
  return true;
}

double wrap_angle(double angle) {
  double a = std::fmod(angle, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;
  return a;
}

std::vector<double> extract_phases(const PhaseVector& lifted) {
  std::vector<double> out(static_cast<std::size_t>(lifted.size()));
  const double ref = std::arg(lifted.t);
  for (int l = 0; l < lifted.size(); ++l) {
    out[static_cast<std::size_t>(l)] = wrap_angle(std::arg(lifted.v(l)) - ref);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Channels and rates

EffectiveChannels effective_channels(const ChannelSet& ch, const PhaseVector& theta_first,
                                     const PhaseVector& theta_second) {
  const int L = ch.L();
  if (theta_first.size() != L || theta_second.size() != L) {
    throw DomainError("effective_channels: phase vector length does not match L");
  }
  const CVector refl1 = theta_first.reflection();
  const CVector refl2 = theta_second.reflection();

  EffectiveChannels eff;
  eff.H_TIR = ch.H_TR + ch.H_IR * refl1.asDiagonal() * ch.H_TI;

  // Conjugated phases: the row vector h_I^H Theta G becomes G^H Theta^H h_I.
  const CMatrix weighted1 = refl1.conjugate().asDiagonal() * ch.h_I;
  const CMatrix weighted2 = refl2.conjugate().asDiagonal() * ch.h_I;
  eff.h_TI = ch.H_TI.adjoint() * weighted1 + ch.h_T;
  eff.h_RI = ch.H_IR * weighted2 + ch.h_R;
  return eff;
}

double relay_rate(const CMatrix& H_TIR, const CMatrix& W, double noise_power) {
  const auto N = H_TIR.rows();
  const CMatrix HW = H_TIR * W;
  const CMatrix A = CMatrix::Identity(N, N) + (HW * HW.adjoint()) / noise_power;
  return std::max(0.0, log2_det_hermitian(A));
}

double link_sinr(const CMatrix& rows, const CMatrix& P, double noise_power, int k,
                 double extra_interference) {
  const CVector gains = (rows.col(k).adjoint() * P).transpose();
  double interference = extra_interference + noise_power;
  for (int i = 0; i < gains.size(); ++i) {
    if (i != k) interference += std::norm(gains(i));
  }
  return std::norm(gains(k)) / interference;
}

HalfDuplexSinr half_duplex_sinr(const EffectiveChannels& eff, const CMatrix& W, const CMatrix& U,
                                double noise_power, int k) {
  return {link_sinr(eff.h_TI, W, noise_power, k), link_sinr(eff.h_RI, U, noise_power, k)};
}

double full_duplex_sinr(const EffectiveChannels& eff, const CMatrix& W, const CMatrix& U,
                        double noise_power, int k) {
  const double bs_interference = (eff.h_TI.col(k).adjoint() * W).squaredNorm();
  return link_sinr(eff.h_RI, U, noise_power, k, bs_interference);
}

std::vector<double> full_duplex_user_noise(const EffectiveChannels& eff, const CMatrix& W,
                                           double noise_power) {
  std::vector<double> out(static_cast<std::size_t>(eff.h_TI.cols()));
  for (int k = 0; k < eff.h_TI.cols(); ++k) {
    out[static_cast<std::size_t>(k)] =
        (eff.h_TI.col(k).adjoint() * W).squaredNorm() + noise_power;
  }
  return out;
}

// ---------------------------------------------------------------------------
// BS precoder

double WaterFilling::total_power() const {
  double acc = 0.0;
  for (double p : powers) acc += p;
  return acc;
}

double WaterFilling::rate(double noise_power) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < powers.size(); ++i) {
    acc += std::log2(1.0 + powers[i] * eigenvalues[i] / noise_power);
  }
  return acc;
}

WaterFilling svd_waterfilling(const CMatrix& H, double noise_power, double rate_target,
                              int num_columns, int max_modes) {
  if (!(rate_target >= 0.0)) throw DomainError("svd_waterfilling: negative rate target");
  if (!(noise_power > 0.0)) throw DomainError("svd_waterfilling: noise power must be positive");
  const auto M = H.cols();
  WaterFilling out;
  out.W = CMatrix::Zero(M, num_columns);
  if (rate_target == 0.0) return out;

  Eigen::JacobiSVD<CMatrix> svd(H, Eigen::ComputeFullV);
  const RVector& sv = svd.singularValues();
  int modes = std::min<int>(static_cast<int>(sv.size()), num_columns);
  if (max_modes >= 0) modes = std::min(modes, max_modes);

  std::vector<double> lambda;
  for (int i = 0; i < modes; ++i) {
    const double l = sv(i) * sv(i);
    if (l > 0.0 && std::isfinite(l)) lambda.push_back(l);
  }
  if (lambda.empty()) {
    throw InfeasibleError("svd_waterfilling: positive rate requested over a zero channel");
  }

  // Active-set water-filling: drop the weakest mode while it would get
  // non-positive power under the common water level.
  int active = static_cast<int>(lambda.size());
  double mu = 0.0;
  while (true) {
    double log_sum = 0.0;
    for (int i = 0; i < active; ++i) log_sum += std::log(lambda[i]);
    mu = std::exp(std::log(noise_power) + (rate_target * std::numbers::ln2 - log_sum) / active);
    if (active == 1 || mu > noise_power / lambda[active - 1]) break;
    --active;
  }

  out.water_level = mu;
  out.active_modes = active;
  for (int i = 0; i < active; ++i) {
    const double p = mu - noise_power / lambda[i];
    out.powers.push_back(p);
    out.eigenvalues.push_back(lambda[i]);
    out.W.col(i) = svd.matrixV().col(i) * std::sqrt(p);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Relay precoders

DualityResult duality_beamforming(const CMatrix& rows, std::span<const double> user_noise,
                                  std::span<const double> targets, const DualityOptions& options) {
  check_targets(rows, user_noise, targets);
  const auto N = rows.rows();
  const auto K = static_cast<int>(rows.cols());

  DualityResult out;
  out.U = CMatrix::Zero(N, K);
  out.uplink_powers.assign(static_cast<std::size_t>(K), 0.0);

  std::vector<int> active;
  for (int k = 0; k < K; ++k) {
    if (targets[static_cast<std::size_t>(k)] > 0.0) active.push_back(k);
  }
  if (active.empty()) return out;
  const int A = static_cast<int>(active.size());

  // Scale row k by 1/sqrt(noise_k): the problem then has unit noise.
  CMatrix R(N, A);
  RVector eta(A);
  for (int a = 0; a < A; ++a) {
    const auto k = static_cast<std::size_t>(active[a]);
    R.col(a) = rows.col(active[a]) / std::sqrt(user_noise[k]);
    eta(a) = targets[k];
    if (R.col(a).squaredNorm() == 0.0) {
      throw InfeasibleError("duality_beamforming: user with positive target has a zero channel");
    }
  }

  // Uplink powers beta. The iteration is the fixed point
  //   beta_k = 1 / ((1 + 1/eta_k) r_k^H Sigma^-1 r_k),  Sigma = I + sum beta_i r_i r_i^H,
  // rewritten with Sherman-Morrison as beta_k = eta_k / (r_k^H Sigma_{-k}^-1 r_k),
  // which has the same fixed point and does not stall at high targets.
  RVector beta(A);
  for (int a = 0; a < A; ++a) beta(a) = eta(a) / R.col(a).squaredNorm();

  auto covariance = [&](const RVector& b) {
    CMatrix S = CMatrix::Identity(N, N);
    for (int a = 0; a < A; ++a) S += b(a) * R.col(a) * R.col(a).adjoint();
    return S;
  };

  bool converged = false;
  int it = 0;
  for (; it < options.max_iters; ++it) {
    Eigen::LLT<CMatrix> llt(covariance(beta));
    const CMatrix SiR = llt.solve(R);
    RVector next(A);
    for (int a = 0; a < A; ++a) {
      const double s = std::max(R.col(a).dot(SiR.col(a)).real(), 0.0);
      const double denom = 1.0 - beta(a) * s;
      const double s_minus = denom > 0.0 ? s / denom : 0.0;
      next(a) = s_minus > 0.0 ? eta(a) / s_minus : std::numeric_limits<double>::infinity();
    }
    if (!next.allFinite() || next.maxCoeff() > 1e250) {
      throw InfeasibleError("duality_beamforming: SINR targets are not jointly achievable");
    }
    const double change = ((next - beta).cwiseAbs().array() / next.array()).maxCoeff();
    beta = next;
    if (change <= options.tol) {
      converged = true;
      ++it;
      break;
    }
  }
  if (!converged) {
    throw ConvergenceError("duality_beamforming: uplink power fixed point did not converge");
  }
  out.iterations = it;

  Eigen::LLT<CMatrix> llt(covariance(beta));
  CMatrix dirs = llt.solve(R);
  for (int a = 0; a < A; ++a) dirs.col(a).normalize();

  Eigen::MatrixXd D(A, A);
  const CMatrix gains = R.adjoint() * dirs;  // (i, j): r_i^H ubar_j
  for (int i = 0; i < A; ++i) {
    for (int j = 0; j < A; ++j) {
      D(i, j) = i == j ? std::norm(gains(i, i)) / eta(i) : -std::norm(gains(i, j));
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(D);
  if (!lu.isInvertible()) {
    throw InfeasibleError("duality_beamforming: singular downlink power system");
  }
  const RVector q = lu.solve(RVector::Ones(A));
  for (int a = 0; a < A; ++a) {
    if (!(q(a) > 0.0) || !std::isfinite(q(a))) {
      throw InfeasibleError("duality_beamforming: downlink powers are not positive");
    }
    out.U.col(active[a]) = std::sqrt(q(a)) * dirs.col(a);
    out.uplink_powers[static_cast<std::size_t>(active[a])] = beta(a);
  }
  return out;
}

CMatrix zero_forcing(const CMatrix& rows, std::span<const double> targets,
                     std::span<const double> user_noise) {
  check_targets(rows, user_noise, targets);
  const auto K = rows.cols();
  if (K > rows.rows()) throw SingularError("zero_forcing: more users than relay antennas");

  Eigen::JacobiSVD<CMatrix> svd(rows);
  const RVector& sv = svd.singularValues();
  if (sv.size() == 0 || !(sv(sv.size() - 1) > 1e-12 * sv(0))) {
    throw SingularError("zero_forcing: stacked user channels are rank deficient");
  }

  const CMatrix gram = rows.adjoint() * rows;
  CMatrix U = rows * gram.ldlt().solve(CMatrix::Identity(K, K));
  for (Eigen::Index k = 0; k < K; ++k) {
    const auto i = static_cast<std::size_t>(k);
    U.col(k) *= std::sqrt(user_noise[i] * targets[i]);
  }
  return U;
}

// ---------------------------------------------------------------------------
// Relay-rate surrogate

double SurrogateData::evaluate(const CVector& v) const {
  return F + 2.0 * v.dot(x).real() + v.dot(Xbar * v).real();
}

SurrogateData surrogate_relay_rate(const ChannelSet& ch, const PhaseVector& expansion,
                                   const CMatrix& W) {
  const auto N = ch.N();
  const CVector refl = expansion.reflection();
  const CMatrix H = ch.H_TR + ch.H_IR * refl.asDiagonal() * ch.H_TI;
  const CMatrix S = W * W.adjoint() / ch.noise_power;

  const CMatrix Z = CMatrix::Identity(N, N) + H * S * H.adjoint();
  const CMatrix Y = Z.llt().solve(CMatrix::Identity(N, N));

  // log det(A) <= log det(Z) + tr(Z^-1 (A - Z)), converted to bits.
  constexpr double inv_ln2 = 1.0 / std::numbers::ln2;
  SurrogateData out;
  out.F = log2_det_hermitian(Z) +
          inv_ln2 * (Y.trace().real() + (Y * ch.H_TR * S * ch.H_TR.adjoint()).trace().real() -
                     static_cast<double>(N));

  const CMatrix cross = ch.H_IR.adjoint() * Y * ch.H_TR * S * ch.H_TI.adjoint();
  out.x = inv_ln2 * cross.diagonal();

  const CMatrix P = ch.H_IR.adjoint() * Y * ch.H_IR;
  const CMatrix Q = ch.H_TI * S * ch.H_TI.adjoint();
  out.Xbar = inv_ln2 * P.cwiseProduct(Q.transpose());
  out.Xbar = 0.5 * (out.Xbar + out.Xbar.adjoint()).eval();
  return out;
}

// ---------------------------------------------------------------------------
// Coupling blocks

namespace {

struct SideChannels {
  const CMatrix& to_ris;  // L x (M or N): transmitter -> RIS
  const CMatrix& direct;  // (M or N) x K
};

SideChannels side_channels(const ChannelSet& ch, CouplingSide side, CMatrix& storage) {
  if (side == CouplingSide::BaseStation) return {ch.H_TI, ch.h_T};
  storage = ch.H_IR.adjoint();
  return {storage, ch.h_R};
}

// Block for one (user, precoder column) pair and its direct scalar.
CMatrix make_block(const CVector& alpha, cd b) {
  const auto L = alpha.size();
  CMatrix B = CMatrix::Zero(L + 1, L + 1);
  B.topLeftCorner(L, L) = alpha * alpha.adjoint();
  B.topRightCorner(L, 1) = alpha * b;
  B.bottomLeftCorner(1, L) = std::conj(b) * alpha.adjoint();
  return B;
}

}  // namespace

CMatrix CouplingBlocks::desired_sum() const {
  if (blocks.empty()) return {};
  CMatrix acc = CMatrix::Zero(blocks[0][0].rows(), blocks[0][0].cols());
  for (std::size_t k = 0; k < blocks.size(); ++k) acc += blocks[k][k];
  return acc;
}

CouplingBlocks coupling_blocks(const ChannelSet& ch, const CMatrix& precoder, CouplingSide side) {
  CMatrix storage;
  const SideChannels sc = side_channels(ch, side, storage);
  const int K = ch.K();
  if (precoder.rows() != sc.to_ris.cols() || precoder.cols() != K) {
    throw DomainError("coupling_blocks: precoder dimensions do not match the channel set");
  }
  const CMatrix at_ris = sc.to_ris * precoder;  // L x K
  CouplingBlocks out;
  out.blocks.resize(static_cast<std::size_t>(K));
  out.scalars.resize(K, K);
  for (int k = 0; k < K; ++k) {
    out.blocks[static_cast<std::size_t>(k)].reserve(static_cast<std::size_t>(K));
    for (int i = 0; i < K; ++i) {
      // h_I,k^H Theta G p_i = sum_l v_l conj(h_I,k)_l (G p_i)_l = alpha^H v.
      const CVector alpha = ch.h_I.col(k).cwiseProduct(at_ris.col(i).conjugate());
      const cd b = sc.direct.col(k).dot(precoder.col(i));
      out.scalars(k, i) = b;
      out.blocks[static_cast<std::size_t>(k)].push_back(make_block(alpha, b));
    }
  }
  return out;
}

CMatrix desired_signal_blocks(const ChannelSet& ch, const CMatrix& precoder, CouplingSide side) {
  CMatrix storage;
  const SideChannels sc = side_channels(ch, side, storage);
  const int K = ch.K();
  const int L = ch.L();
  if (precoder.rows() != sc.to_ris.cols() || precoder.cols() != K) {
    throw DomainError("desired_signal_blocks: precoder dimensions do not match the channel set");
  }
  const CMatrix at_ris = sc.to_ris * precoder;
  CMatrix acc = CMatrix::Zero(L + 1, L + 1);
  for (int k = 0; k < K; ++k) {
    const CVector alpha = ch.h_I.col(k).cwiseProduct(at_ris.col(k).conjugate());
    const cd b = sc.direct.col(k).dot(precoder.col(k));
    acc += make_block(alpha, b);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Phase updates

PhaseVector linearized_phase_step(const SurrogateData& surrogate, const PhaseVector& anchor) {
  const CVector a = anchor.reflection();
  const auto L = a.size();
  if (surrogate.x.size() != L || surrogate.Xbar.rows() != L) {
    throw DomainError("linearized_phase_step: surrogate and anchor sizes differ");
  }
  PhaseVector out;
  if (L == 0) {
    out.v = CVector(0);
    return out;
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(surrogate.Xbar, Eigen::EigenvaluesOnly);
  const double lambda_max = es.eigenvalues()(L - 1);
  const CVector q = surrogate.x + surrogate.Xbar * a - lambda_max * a;
  out.v = unit_modulus(q, a);
  return out;
}

FixedPointResult fixed_point_phase(const CMatrix& A, const PhaseVector& init, double tol,
                                   int max_iters) {
  const auto n = A.rows();
  if (A.cols() != n || init.size() + 1 != n) {
    throw DomainError("fixed_point_phase: block size does not match the phase vector");
  }
  FixedPointResult out;
  CVector current = init.lifted();
  auto objective = [&](const CVector& x) { return x.dot(A * x).real(); };
  out.objective.push_back(objective(current));

  Eigen::SelfAdjointEigenSolver<CMatrix> es(A, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  const double lmax = es.eigenvalues()(n - 1);
  const double scale = std::max(std::abs(lmin), std::abs(lmax));
  const double loading = std::max(0.0, -lmin) + (scale > 0.0 ? 1e-9 * scale : 1.0);
  CMatrix S = A;
  S.diagonal().array() += loading;

  for (int it = 0; it < max_iters; ++it) {
    const CVector next = unit_modulus(S * current, current);
    const double step = (next - current).norm();
    current = next;
    out.objective.push_back(objective(current));
    out.iterations = it + 1;
    if (step <= tol) {
      out.converged = true;
      break;
    }
  }
  out.lifted = current;
  out.phases = PhaseVector::from_lifted(current).normalized();
  return out;
}

FixedPointResult fixed_point_phase(std::span<const CMatrix> blocks, const PhaseVector& init,
                                   double tol, int max_iters) {
  if (blocks.empty()) throw DomainError("fixed_point_phase: no blocks given");
  CMatrix acc = CMatrix::Zero(blocks[0].rows(), blocks[0].cols());
  for (const auto& b : blocks) acc += b;
  return fixed_point_phase(acc, init, tol, max_iters);
}

}  // namespace risrelay
