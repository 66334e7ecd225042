// Copyright 2026 The mvsde Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "mvsde/linalg.hpp"

namespace mvsde {

/// Uniformly weighted particle cloud standing in for a probability measure
/// on R^d. Points are stored row-major as an N x d block.
class EmpiricalMeasure {
 public:
  /// Takes `points` as N*dim row-major coordinates. Throws InvalidArgument on
  /// an empty cloud, a zero dimension, a ragged size, or a non-finite value.
  EmpiricalMeasure(std::vector<double> points, std::size_t dim);

  /// One-dimensional cloud.
  EmpiricalMeasure(std::initializer_list<double> points);
  static EmpiricalMeasure from_scalars(std::vector<double> points);
  static EmpiricalMeasure from_rows(const std::vector<std::vector<double>>& rows);
  /// N copies of the origin in R^dim.
  static EmpiricalMeasure dirac_origin(std::size_t n, std::size_t dim);

  std::size_t size() const noexcept { return points_.size() / dim_; }
  std::size_t dim() const noexcept { return dim_; }

  std::span<const double> point(std::size_t i) const noexcept {
    return {points_.data() + i * dim_, dim_};
  }
  std::span<const double> flat() const noexcept { return points_; }

  /// (1/N) sum_i x_i, componentwise.
  Vector mean() const;
  /// (1/N) sum_i |x_i|^p for p > 0 (no root taken).
  double raw_abs_moment(double p) const;

  /// Every coordinate multiplied by c.
  EmpiricalMeasure scaled(double c) const;

  friend bool operator==(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
    return a.dim_ == b.dim_ && a.points_ == b.points_;
  }

 private:
  std::vector<double> points_;
  std::size_t dim_;
};

/// Equal-size coupling as a permutation: point i of the first cloud is paired
/// with point pairing[i] of the second, each pair carrying weight 1/N.
struct Coupling {
  std::vector<std::size_t> pairing;

  static Coupling identity(std::size_t n);
  /// Mean of |x_i - y_pairing[i]|^r.
  double cost(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, double r) const;
};

/// Default cap on N for the exact multi-dimensional assignment solve.
inline constexpr std::size_t kDefaultAssignmentLimit = 512;

/// ||mu||_r = ((1/N) sum |x_i|^r)^(1/r), r >= 1.
double moment(const EmpiricalMeasure& mu, double r);

/// Radial projection onto the closed ball of radius n: n x / max(n, |x|).
Vector phi(std::span<const double> x, double n);
void phi_inplace(std::span<double> x, double n) noexcept;

/// Every point mapped through phi(., n).
EmpiricalMeasure pushforward_phi(const EmpiricalMeasure& mu, double n);

/// Coupling attaining W_r. d = 1: stable-sorted monotone pairing. d > 1:
/// Hungarian assignment on the cost |x_i - y_j|^r.
Coupling optimal_coupling(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, double r,
                          std::size_t assignment_limit = kDefaultAssignmentLimit);

/// Exact W_r between two equal-size clouds, r >= 1.
///
/// Throws UnequalSupportSize, DimensionMismatch, or AssignmentTooLarge (d > 1
/// and N > assignment_limit). Never approximates.
double wasserstein(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, double r,
                   std::size_t assignment_limit = kDefaultAssignmentLimit);

/// W_{r,N}: transport cost after clipping both clouds by phi(., n), with the
/// same 1/r root as wasserstein.
double wasserstein_local(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, double r, double n,
                         std::size_t assignment_limit = kDefaultAssignmentLimit);

}  // namespace mvsde
