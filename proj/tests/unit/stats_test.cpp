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
#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "mvsde/error.hpp"
#include "mvsde/rng.hpp"
#include "mvsde/stats.hpp"

namespace mvsde {
namespace {

TEST(LeastSquares, ExactLine) {
  const std::vector<double> x{0, 1, 2, 3}, y{1, -1, -3, -5};
  const auto fit = least_squares(x, y);
  EXPECT_DOUBLE_EQ(fit.slope, -2.0);
  EXPECT_DOUBLE_EQ(fit.intercept, 1.0);
  EXPECT_DOUBLE_EQ(fit.r2, 1.0);
}

TEST(LeastSquares, DegenerateInputs) {
  EXPECT_THROW(least_squares(std::vector<double>{1.0}, std::vector<double>{2.0}), InvalidArgument);
  EXPECT_THROW(least_squares(std::vector<double>{1.0, 1.0}, std::vector<double>{2.0, 3.0}), InvalidArgument);
  const auto flat = least_squares(std::vector<double>{0.0, 1.0}, std::vector<double>{4.0, 4.0});
  EXPECT_EQ(flat.slope, 0.0);
  EXPECT_EQ(flat.r2, 1.0);
}

TEST(LeastSquares, KnownResidualFit) {
  // y = x + (+1, -1, -1, +1): slope 1, intercept 0, r2 = 5 / 9.
  const std::vector<double> x{0, 1, 2, 3}, y{1, 0, 1, 4};
  const auto fit = least_squares(x, y);
  EXPECT_NEAR(fit.slope, 1.0, 1e-14);
  EXPECT_NEAR(fit.intercept, 0.0, 1e-14);
  EXPECT_NEAR(fit.r2, 5.0 / 9.0, 1e-14);
}

TEST(BlockJackknife, EqualBlocksReduceToBlockMeanSpread) {
  // With equal blocks the delete-one jackknife equals sd(block means)/sqrt(B).
  const std::size_t blocks = 10, per = 7;
  StreamSampler s(5, 0);
  std::vector<double> v(blocks * per);
  for (double& x : v) x = s.normal();
  std::vector<double> bm(blocks, 0.0);
  for (std::size_t b = 0; b < blocks; ++b) {
    for (std::size_t i = 0; i < per; ++i) bm[b] += v[b * per + i];
    bm[b] /= per;
  }
  const auto est = block_jackknife_mean(v, blocks);
  EXPECT_NEAR(est.mean, std::accumulate(v.begin(), v.end(), 0.0) / v.size(), 1e-14);
  EXPECT_NEAR(est.stderr_value, sample_stddev(bm) / std::sqrt(double(blocks)), 1e-14);
}

TEST(BlockJackknife, IidStandardErrorScale) {
  StreamSampler s(6, 0);
  std::vector<double> v(40000);
  for (double& x : v) x = 2.0 * s.normal();
  const auto est = block_jackknife_mean(v, 20);
  EXPECT_NEAR(est.stderr_value, 2.0 / 200.0, 0.4 * 2.0 / 200.0);
}

TEST(SampleStddev, ByHand) { EXPECT_DOUBLE_EQ(sample_stddev(std::vector<double>{1, 2, 3, 4}), std::sqrt(5.0 / 3.0)); }

TEST(ShapeSummary, SymmetricTwoPointLaw) {
  // +-1 with equal weight: mean 0, variance 1, excess kurtosis -2.
  std::vector<double> v;
  for (int i = 0; i < 400; ++i) v.push_back(i % 2 ? 1.0 : -1.0);
  const auto s = shape_summary(v, 20);
  EXPECT_NEAR(s.mean, 0.0, 1e-15);
  EXPECT_NEAR(s.variance, 1.0, 1e-14);
  EXPECT_NEAR(s.excess_kurtosis, -2.0, 1e-13);
}

TEST(ShapeSummary, GaussianSample) {
  StreamSampler s(8, 0);
  std::vector<double> v(100000);
  for (double& x : v) x = 3.0 + 0.5 * s.normal();
  const auto sh = shape_summary(v, 20);
  EXPECT_NEAR(sh.mean, 3.0, 5.0 * sh.mean_stderr);
  EXPECT_NEAR(sh.variance, 0.25, 5.0 * sh.variance_stderr);
  EXPECT_NEAR(sh.excess_kurtosis, 0.0, 5.0 * sh.kurtosis_stderr);
  EXPECT_NEAR(sh.mean_stderr, 0.5 / std::sqrt(1e5), 0.4 * 0.5 / std::sqrt(1e5));
}

}  // namespace
}  // namespace mvsde
