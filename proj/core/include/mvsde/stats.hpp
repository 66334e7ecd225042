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
#include <span>
#include <vector>

namespace mvsde {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// Coefficient of determination; 1 for exactly collinear data.
  double r2 = 0.0;
};

/// Ordinary least squares of y on x. Requires at least two distinct x values.
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

/// Mean and delete-one-block jackknife standard error of the sample mean of
/// `values`, using `blocks` contiguous blocks (clamped to values.size()).
struct MeanEstimate {
  double mean = 0.0;
  double stderr_value = 0.0;
};
MeanEstimate block_jackknife_mean(std::span<const double> values, std::size_t blocks);

/// Sample standard deviation (n - 1 denominator); 0 for fewer than 2 values.
double sample_stddev(std::span<const double> values);

struct ShapeSummary {
  double mean = 0.0;
  double variance = 0.0;
  double excess_kurtosis = 0.0;
  double mean_stderr = 0.0;
  double variance_stderr = 0.0;
  double kurtosis_stderr = 0.0;
};

/// Mean, (population) variance and excess kurtosis of a scalar sample, with
/// block-jackknife standard errors.
ShapeSummary shape_summary(std::span<const double> values, std::size_t blocks);

}  // namespace mvsde
