// SPDX-License-Identifier: Apache-2.0
//
// Scenario geometry, large-scale pathloss and small-scale fading for the
// BS / relay / RIS / users topology.

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "risrelay/types.hpp"

namespace risrelay {

using Vec3 = Eigen::Vector3d;

/// Element offsets of an antenna array, in units of wavelength, relative to
/// the node position.
struct ArrayLayout {
  std::vector<Vec3> offsets;

  int size() const { return static_cast<int>(offsets.size()); }

  /// Uniform linear array of `count` elements along `axis`.
  static ArrayLayout ula(int count, const Vec3& axis, double spacing_wavelengths);
  /// Uniform planar array, `rows` along `row_axis` and `cols` along `col_axis`.
  static ArrayLayout upa(int rows, int cols, const Vec3& row_axis, const Vec3& col_axis,
                         double spacing_wavelengths);
};

struct SystemGeometry {
  int M = 5;   // BS antennas
  int N = 5;   // relay antennas
  int K = 4;   // users
  int L = 50;  // RIS elements

  Vec3 bs_position{0.0, 0.0, 25.0};
  Vec3 relay_position{300.0, 0.0, 10.0};
  Vec3 ris_position{300.0, 10.0, 10.0};
  Vec3 user_circle_center{300.0, 0.0, 1.5};
  double user_circle_radius = 35.0;

  /// Element spacing over carrier wavelength; only shapes the LoS phase pattern.
  double spacing_wavelengths = 0.5;

  ArrayLayout bs_array;
  ArrayLayout relay_array;
  ArrayLayout ris_array;
  int ris_rows = 0;
  int ris_cols = 0;

  /// Geometry with ULAs along y at BS and relay and a UPA in the y-z plane
  /// at the RIS. The UPA shape is the most square factorisation of L.
  static SystemGeometry make(int M, int N, int K, int L);

  /// Rebuild the array layouts after M/N/L or spacing changed.
  void rebuild_arrays();

  /// Throws DomainError when an invariant is broken.
  void validate() const;
};

struct FadingParams {
  double gt_dbi = 5.0;
  double gr_dbi = 0.0;
  double alpha_los = 2.2;
  double alpha_nlos = 3.67;
  double c_offset_los_db = 35.95;
  double c_offset_nlos_db = 33.95;
  double rician_k = 10.0;
  double noise_power = 1e-8;  // mW (-80 dBm)

  void validate() const;
};

/// One realisation of every link. Users are columns of h_T, h_R, h_I; the
/// received signal of user k from precoder w is h_T.col(k)^H w.
struct ChannelSet {
  CMatrix H_TR;  // N x M, BS -> relay
  CMatrix H_TI;  // L x M, BS -> RIS
  CMatrix H_IR;  // N x L, RIS -> relay (relay -> RIS is its conjugate transpose)
  CMatrix h_T;   // M x K
  CMatrix h_R;   // N x K
  CMatrix h_I;   // L x K
  double noise_power = 1e-8;
  std::vector<Vec3> user_positions;

  int M() const { return static_cast<int>(H_TR.cols()); }
  int N() const { return static_cast<int>(H_TR.rows()); }
  int L() const { return static_cast<int>(H_TI.rows()); }
  int K() const { return static_cast<int>(h_T.cols()); }

  void validate() const;

  /// Copy with every RIS-adjacent link set to zero.
  ChannelSet without_ris() const;
};

/// beta = C / d^alpha with the LoS or NLoS constant set.
double pathloss(double distance, bool los, const FadingParams& params);

/// Far-field LoS response rx_array x tx_array; every entry has unit modulus.
CMatrix los_component(const ArrayLayout& tx_array, const Vec3& tx_position,
                      const ArrayLayout& rx_array, const Vec3& rx_position);

/// Draw one scenario. Identical (geometry, params, seed) yields a bit-identical
/// ChannelSet. Each link has its own random stream, so links that do not
/// depend on L or K are shared between runs that only differ in those.
ChannelSet generate_scenario(const SystemGeometry& geometry, const FadingParams& params,
                             std::uint64_t seed);

}  // namespace risrelay
