// SPDX-License-Identifier: Apache-2.0
//
// Shared kernel: effective channels, rate/SINR evaluators, BS and relay
// precoders, the relay-rate surrogate, RIS coupling blocks and the two
// continuous phase-update rules.
//
// Phase convention: PhaseVector::v holds the diagonal of the reflection
// matrix, v_l = exp(j theta_l). The lifted vector is [v; t] and the realised
// phases are arg(v_l) - arg(t).

#pragma once

#include <span>
#include <vector>

#include "risrelay/channel_model.hpp"

namespace risrelay {

struct PhaseVector {
  CVector v;
  cd t{1.0, 0.0};

  int size() const { return static_cast<int>(v.size()); }

  /// All phases zero, t = 1.
  static PhaseVector identity(int L);
  static PhaseVector from_angles(std::span<const double> angles);

  /// [v; t]
  CVector lifted() const;
  static PhaseVector from_lifted(const CVector& lifted);

  /// Same realised phases with t = 1.
  PhaseVector normalized() const;
  /// Diagonal of the realised reflection matrix (v / t).
  CVector reflection() const;
};

struct EffectiveChannels {
  CMatrix H_TIR;  // N x M
  CMatrix h_RI;   // N x K, column k: relay -> user k incl. RIS path
  CMatrix h_TI;   // M x K, column k: BS -> user k incl. RIS path
};

/// Unit-modulus check with tolerance.
bool is_unit_modulus(const CVector& v, double tol = 1e-9);

EffectiveChannels effective_channels(const ChannelSet& ch, const PhaseVector& theta_first,
                                     const PhaseVector& theta_second);

/// log2 det(I + H W W^H H^H / noise)
double relay_rate(const CMatrix& H_TIR, const CMatrix& W, double noise_power);

struct HalfDuplexSinr {
  double first;   // BS phase, through direct and reflected links
  double second;  // relay phase
};

HalfDuplexSinr half_duplex_sinr(const EffectiveChannels& eff, const CMatrix& W, const CMatrix& U,
                                double noise_power, int k);

/// Relay signal SINR with the BS transmission treated as noise.
double full_duplex_sinr(const EffectiveChannels& eff, const CMatrix& W, const CMatrix& U,
                        double noise_power, int k);

/// SINR of user k for a single-hop precoder P over channel columns `rows`
/// plus an extra interference term.
double link_sinr(const CMatrix& rows, const CMatrix& P, double noise_power, int k,
                 double extra_interference = 0.0);

/// Effective noise of each user under full-duplex: BS interference + noise.
std::vector<double> full_duplex_user_noise(const EffectiveChannels& eff, const CMatrix& W,
                                           double noise_power);

struct WaterFilling {
  CMatrix W;                         // M x num_columns
  std::vector<double> powers;        // per mode, descending eigenvalue order
  std::vector<double> eigenvalues;   // of H H^H, descending, used modes only
  double water_level = 0.0;
  int active_modes = 0;

  double total_power() const;
  /// sum log2(1 + P_k lambda_k / noise)
  double rate(double noise_power) const;
};

/// Minimum-power BS precoder reaching `rate_target` bits over the strongest
/// min(M, N, num_columns, max_modes) eigenmodes of H.
WaterFilling svd_waterfilling(const CMatrix& H, double noise_power, double rate_target,
                              int num_columns, int max_modes = -1);

struct DualityOptions {
  double tol = 1e-8;      // relative change of the uplink powers
  int max_iters = 500;
};

struct DualityResult {
  CMatrix U;
  std::vector<double> uplink_powers;
  int iterations = 0;
};

/// Downlink power minimisation under SINR targets through the virtual uplink.
/// Column k of `rows` is the effective channel of user k (user k receives
/// rows.col(k)^H u). Users with a zero target get u_k = 0.
DualityResult duality_beamforming(const CMatrix& rows, std::span<const double> user_noise,
                                  std::span<const double> targets,
                                  const DualityOptions& options = {});

/// U = H^H (H H^H)^-1 Q^1/2 with H the stacked rows and q_k = noise_k * eta_k.
CMatrix zero_forcing(const CMatrix& rows, std::span<const double> targets,
                     std::span<const double> user_noise);

/// Tangent upper bound of the relay rate around an expansion point:
/// R(v) <= F + 2 Re{v^H x} + v^H Xbar v, equal at the expansion point.
struct SurrogateData {
  double F = 0.0;
  CVector x;
  CMatrix Xbar;

  double evaluate(const CVector& v) const;
};

SurrogateData surrogate_relay_rate(const ChannelSet& ch, const PhaseVector& expansion,
                                   const CMatrix& W);

enum class CouplingSide { BaseStation, Relay };

/// Quadratic forms of the RIS phases. For column i of the precoder and user k,
/// [v;t]^H blocks[k][i] [v;t] + |scalars(k,i)|^2 = |(received through RIS + direct) p_i|^2.
struct CouplingBlocks {
  std::vector<std::vector<CMatrix>> blocks;  // K x K, each (L+1) x (L+1)
  CMatrix scalars;                           // K x K, direct-link terms

  CMatrix desired_sum() const;  // sum_k blocks[k][k]
};

CouplingBlocks coupling_blocks(const ChannelSet& ch, const CMatrix& precoder, CouplingSide side);

/// Only sum_k blocks[k][k], without building the cross terms.
CMatrix desired_signal_blocks(const ChannelSet& ch, const CMatrix& precoder, CouplingSide side);

/// One closed-form phase update from the surrogate. Entries of q that vanish
/// keep the anchor phase. Returned vector has t = 1.
PhaseVector linearized_phase_step(const SurrogateData& surrogate, const PhaseVector& anchor);

struct FixedPointResult {
  PhaseVector phases;                // realised phases, t = 1
  CVector lifted;                    // final iterate before normalisation
  std::vector<double> objective;     // [v;t]^H A [v;t] per iterate, starting with init
  int iterations = 0;
  bool converged = false;
};

/// Fixed-point ascent of [v;t]^H A [v;t] over unit-modulus vectors, with A
/// diagonally loaded to be positive semidefinite.
FixedPointResult fixed_point_phase(const CMatrix& A, const PhaseVector& init, double tol = 1e-6,
                                   int max_iters = 1000);
FixedPointResult fixed_point_phase(std::span<const CMatrix> blocks, const PhaseVector& init,
                                   double tol = 1e-6, int max_iters = 1000);

/// arg(v_l) - arg(t), wrapped to [0, 2 pi).
std::vector<double> extract_phases(const PhaseVector& lifted);

/// Wrap an angle to [0, 2 pi).
double wrap_angle(double angle);

}  // namespace risrelay
