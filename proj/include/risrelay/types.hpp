// SPDX-License-Identifier: Apache-2.0
//
// Common numeric types and error classes.

#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace risrelay {

using cd = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Invalid argument or geometry (non-positive distance, bad dimensions, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A QoS target cannot be met by the requested precoder design.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An inner fixed point did not settle within its iteration budget.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rank-deficient channel where a full-rank one is required.
class SingularError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exhaustive search refused because the enumeration would be too large.
class SearchSpaceError : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }
inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

}  // namespace risrelay
