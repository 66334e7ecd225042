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
#include <cstdint>
#include <vector>

#include "mvsde/measure.hpp"

namespace mvsde {

/// Gaussian-mixture cloud family used by the inequality falsifiers.
///
/// Every `stress_every`-th draw is replaced by a stress cloud, cycling through
/// an exact Dirac at the origin, a near-Dirac cloud at a random centre, and a
/// heavily dilated mixture.
struct CloudFamily {
  std::size_t cloud_size = 32;
  std::size_t components = 3;
  double mean_lo = -2.0;
  double mean_hi = 2.0;
  double scale_lo = 0.1;
  double scale_hi = 1.5;
  std::size_t stress_every = 8;
  double dilation = 10.0;
};

/// Deterministic draw number `index` from the family for dimension `dim`.
EmpiricalMeasure sample_cloud(const CloudFamily& family, std::size_t dim, std::uint64_t seed, std::uint64_t index);

/// Gaussian cloud N(mean, std^2 I) with n points. With `symmetric`, the second
/// half of the cloud mirrors the first about `mean` (n must be even).
EmpiricalMeasure gaussian_cloud(std::size_t n, std::size_t dim, double mean, double std, std::uint64_t seed,
                                bool symmetric = false);

/// Uniform point in the ball of radius r (d = 1: uniform on [-r, r]).
std::vector<double> sample_in_ball(std::size_t dim, double r, std::uint64_t seed, std::uint64_t index);

/// Deterministic random permutation of 0..n-1 (Fisher-Yates on a counter stream).
std::vector<std::size_t> random_permutation(std::size_t n, std::uint64_t seed, std::uint64_t index);

}  // namespace mvsde
