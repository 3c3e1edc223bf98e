// SPDX-License-Identifier: Apache-2.0

#include "risrelay/channel_model.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace risrelay {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Stream identifiers; changing them changes every generated scenario.
enum class Stream : std::uint32_t {
  kUserPosition = 1,
  kBsRelay = 2,
  kBsRis = 3,
  kRisRelay = 4,
  kBsUser = 5,
  kRelayUser = 6,
  kRisUser = 7,
};

std::mt19937_64 make_engine(std::uint64_t seed, Stream stream, std::uint32_t index = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), index};
  return std::mt19937_64(seq);
}

// i.i.d. CN(0, 1) entries.
CMatrix gaussian_matrix(int rows, int cols, std::mt19937_64& engine) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  CMatrix g(rows, cols);
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) {
      const double re = normal(engine);
      const double im = normal(engine);
      g(r, c) = cd(re, im);
    }
  }
  return g;
}

CMatrix rician_link(const ArrayLayout& tx, const Vec3& tx_pos, const ArrayLayout& rx,
                    const Vec3& rx_pos, const FadingParams& params, std::mt19937_64& engine) {
  const double beta = pathloss((rx_pos - tx_pos).norm(), true, params);
  const double kappa = params.rician_k;
  const CMatrix los = los_component(tx, tx_pos, rx, rx_pos);
  const CMatrix nlos = gaussian_matrix(rx.size(), tx.size(), engine);
  return std::sqrt(beta) *
         (std::sqrt(kappa / (1.0 + kappa)) * los + std::sqrt(1.0 / (1.0 + kappa)) * nlos);
}

int most_square_divisor(int n) {
  int best = 1;
  for (int r = 1; r * r <= n; ++r) {
    if (n % r == 0) best = r;
  }
  return best;
}

}  // namespace

ArrayLayout ArrayLayout::ula(int count, const Vec3& axis, double spacing_wavelengths) {
  ArrayLayout layout;
  const Vec3 unit = axis.normalized();
  layout.offsets.reserve(count);
  for (int n = 0; n < count; ++n) {
    layout.offsets.push_back(unit * (spacing_wavelengths * n));
  }
  return layout;
}

ArrayLayout ArrayLayout::upa(int rows, int cols, const Vec3& row_axis, const Vec3& col_axis,
                             double spacing_wavelengths) {
  ArrayLayout layout;
  const Vec3 ru = row_axis.normalized();
  const Vec3 cu = col_axis.normalized();
  layout.offsets.reserve(static_cast<std::size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      layout.offsets.push_back(ru * (spacing_wavelengths * r) + cu * (spacing_wavelengths * c));
    }
  }
  return layout;
}

SystemGeometry SystemGeometry::make(int M, int N, int K, int L) {
  SystemGeometry g;
  g.M = M;
  g.N = N;
  g.K = K;
  g.L = L;
  g.rebuild_arrays();
  return g;
}

void SystemGeometry::rebuild_arrays() {
  const Vec3 y_axis = Vec3::UnitY();
  const Vec3 z_axis = Vec3::UnitZ();
  bs_array = ArrayLayout::ula(M, y_axis, spacing_wavelengths);
  relay_array = ArrayLayout::ula(N, y_axis, spacing_wavelengths);
  if (L > 0) {
    ris_rows = most_square_divisor(L);
    ris_cols = L / ris_rows;
  } else {
    ris_rows = ris_cols = 0;
  }
  ris_array = ArrayLayout::upa(ris_rows, ris_cols, z_axis, y_axis, spacing_wavelengths);
}

void SystemGeometry::validate() const {
  if (M < 1 || N < 1 || K < 1 || L < 1) {
    throw DomainError("geometry: M, N, K, L must all be >= 1");
  }
  if (K > N) {
    throw DomainError("geometry: K must not exceed N (zero-forcing feasibility)");
  }
  if (!(user_circle_radius > 0.0)) {
    throw DomainError("geometry: user circle radius must be positive");
  }
  if (ris_rows * ris_cols != L || ris_array.size() != L) {
    throw DomainError("geometry: RIS UPA shape does not match L");
  }
  if (bs_array.size() != M || relay_array.size() != N) {
    throw DomainError("geometry: array layouts do not match M/N");
  }
  const std::array<Vec3, 4> nodes{bs_position, relay_position, ris_position,
                                  user_circle_center};
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      if (!((nodes[i] - nodes[j]).norm() > 0.0)) {
        throw DomainError("geometry: node positions must be pairwise distinct");
      }
    }
  }
}

void FadingParams::validate() const {
  if (!(alpha_los > 0.0) || !(alpha_nlos > 0.0)) {
    throw DomainError("fading: pathloss exponents must be positive");
  }
  if (!(rician_k >= 0.0)) throw DomainError("fading: Rician K-factor must be >= 0");
  if (!(noise_power > 0.0)) throw DomainError("fading: noise power must be positive");
}

void ChannelSet::validate() const {
  const auto m = M(), n = N(), l = L(), k = K();
  const bool ok = H_TI.cols() == m && H_IR.rows() == n && H_IR.cols() == l &&
                  h_T.rows() == m && h_R.rows() == n && h_R.cols() == k && h_I.rows() == l &&
                  h_I.cols() == k;
  if (!ok) throw DomainError("channel set: inconsistent dimensions");
  if (!(noise_power > 0.0)) throw DomainError("channel set: noise power must be positive");
  for (const CMatrix* mat : {&H_TR, &H_TI, &H_IR, &h_T, &h_R, &h_I}) {
    if (!mat->allFinite()) throw DomainError("channel set: non-finite entry");
  }
}

ChannelSet ChannelSet::without_ris() const {
  ChannelSet out = *this;
  out.H_TI.setZero();
  out.H_IR.setZero();
  out.h_I.setZero();
  return out;
}

double pathloss(double distance, bool los, const FadingParams& params) {
  if (!(distance > 0.0)) throw DomainError("pathloss: distance must be positive");
  const double offset = los ? params.c_offset_los_db : params.c_offset_nlos_db;
  const double alpha = los ? params.alpha_los : params.alpha_nlos;
  const double c = std::pow(10.0, (params.gt_dbi + params.gr_dbi - offset) / 10.0);
  return c / std::pow(distance, alpha);
}

CMatrix los_component(const ArrayLayout& tx_array, const Vec3& tx_position,
                      const ArrayLayout& rx_array, const Vec3& rx_position) {
  const Vec3 delta = rx_position - tx_position;
  const double d = delta.norm();
  if (!(d > 0.0)) throw DomainError("los_component: coincident node positions");
  const Vec3 dir = delta / d;

  // Plane wave travelling along dir: path length to rx element m from tx
  // element n is d + dir.o_m - dir.o_n.
  CVector rx(rx_array.size());
  for (int m = 0; m < rx_array.size(); ++m) {
    rx(m) = std::polar(1.0, -kTwoPi * dir.dot(rx_array.offsets[m]));
  }
  CVector tx(tx_array.size());
  for (int n = 0; n < tx_array.size(); ++n) {
    tx(n) = std::polar(1.0, kTwoPi * dir.dot(tx_array.offsets[n]));
  }
  return rx * tx.transpose();
}

ChannelSet generate_scenario(const SystemGeometry& geometry, const FadingParams& params,
                             std::uint64_t seed) {
  geometry.validate();
  params.validate();

  const int M = geometry.M, N = geometry.N, K = geometry.K, L = geometry.L;
  ChannelSet ch;
  ch.noise_power = params.noise_power;

  ch.user_positions.reserve(K);
  for (int k = 0; k < K; ++k) {
    auto engine = make_engine(seed, Stream::kUserPosition, static_cast<std::uint32_t>(k));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double r = geometry.user_circle_radius * std::sqrt(unit(engine));
    const double phi = kTwoPi * unit(engine);
    ch.user_positions.push_back(geometry.user_circle_center +
                                Vec3(r * std::cos(phi), r * std::sin(phi), 0.0));
  }

  {
    auto engine = make_engine(seed, Stream::kBsRelay);
    ch.H_TR = rician_link(geometry.bs_array, geometry.bs_position, geometry.relay_array,
                          geometry.relay_position, params, engine);
  }
  {
    auto engine = make_engine(seed, Stream::kBsRis);
    ch.H_TI = rician_link(geometry.bs_array, geometry.bs_position, geometry.ris_array,
                          geometry.ris_position, params, engine);
  }
  {
    auto engine = make_engine(seed, Stream::kRisRelay);
    ch.H_IR = rician_link(geometry.ris_array, geometry.ris_position, geometry.relay_array,
                          geometry.relay_position, params, engine);
  }

  ch.h_T.resize(M, K);
  ch.h_R.resize(N, K);
  ch.h_I.resize(L, K);
  auto rayleigh = [&](const Vec3& node, const Vec3& user, int size, Stream stream, int k) {
    auto engine = make_engine(seed, stream, static_cast<std::uint32_t>(k));
    const double beta = pathloss((user - node).norm(), false, params);
    return CVector(std::sqrt(beta) * gaussian_matrix(size, 1, engine));
  };
  for (int k = 0; k < K; ++k) {
    const Vec3& user = ch.user_positions[k];
    ch.h_T.col(k) = rayleigh(geometry.bs_position, user, M, Stream::kBsUser, k);
    ch.h_R.col(k) = rayleigh(geometry.relay_position, user, N, Stream::kRelayUser, k);
    ch.h_I.col(k) = rayleigh(geometry.ris_position, user, L, Stream::kRisUser, k);
  }
  return ch;
}

}  // namespace risrelay
