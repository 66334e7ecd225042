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
#include <vector>

#include "mvsde/error.hpp"
#include "mvsde/model.hpp"

namespace mvsde {
namespace {

double at(const Vector& v) { return v[0]; }
double at(const Matrix& m) { return m(0, 0); }

TEST(Presets, MeanFieldOuByHand) {
  const auto ou = preset_mean_field_ou(1.0);
  const EmpiricalMeasure mu{0.0, 2.0};
  // b = -alpha x - mean = -1 - 1.
  EXPECT_DOUBLE_EQ(at(ou.drift(0.0, Vector{1.0}, mu)), -2.0);
  EXPECT_DOUBLE_EQ(at(ou.diffusion(0.0, Vector{1.0}, mu)), 1.0);
  EXPECT_EQ(ou.preferred_taming(), Taming::none);
  EXPECT_THROW(preset_mean_field_ou(0.0), NonpositiveParameter);
}

TEST(Presets, CubicByHand) {
  const auto cubic = preset_cubic(1.0, 2.0);
  // Clip window [1, 2]: |0.5| -> 1, |3| -> 2, so c = 1.5.
  const EmpiricalMeasure mu{0.5, -3.0};
  EXPECT_DOUBLE_EQ(cubic_clip_mean(mu, 1.0, 2.0), 1.5);
  EXPECT_DOUBLE_EQ(at(cubic.drift(0.0, Vector{2.0}, mu)), -8.0 - 3.0);
  EXPECT_DOUBLE_EQ(at(cubic.diffusion(0.0, Vector{2.0}, mu)), 1.0);
  EXPECT_EQ(cubic.preferred_taming(), Taming::tamed);
  EXPECT_THROW(preset_cubic(2.0, 1.0), BadClipWindow);
  EXPECT_THROW(preset_cubic(0.0, 1.0), NonpositiveParameter);
}

TEST(Presets, LandauLinearByHand) {
  const auto landau = preset_landau_linear(0.25);
  const EmpiricalMeasure mu{1.0, 3.0};
  // shift = alpha * mean = 0.5.
  EXPECT_DOUBLE_EQ(at(landau.drift(0.0, Vector{1.0}, mu)), -3.0);
  EXPECT_DOUBLE_EQ(at(landau.diffusion(0.0, Vector{1.0}, mu)), 1.5);
}

TEST(Presets, LandauConvolutionAveragesShiftedField) {
  const auto conv = preset_landau_convolution(
      1, [](std::span<const double> u) { return Vector{-u[0]}; },
      [](std::span<const double>) { return Matrix::identity(1); }, 0.5);
  const EmpiricalMeasure mu{2.0, 4.0};
  // mean of -(x - 0.5 y) over y in {2, 4} at x = 1: -(1 - 1.5) = 0.5.
  EXPECT_DOUBLE_EQ(at(conv.drift(0.0, Vector{1.0}, mu)), 0.5);
  EXPECT_DOUBLE_EQ(at(conv.diffusion(0.0, Vector{1.0}, mu)), 1.0);
}

TEST(Truncate, ClipsStateAndMeasure) {
  const auto ou = preset_mean_field_ou(1.0);
  const auto t2 = truncate(ou, 2.0);
  const EmpiricalMeasure mu{0.0, 10.0};
  // Inside: state unchanged, measure clipped to {0, 2}, mean 1.
  EXPECT_DOUBLE_EQ(at(t2.drift(0.0, Vector{1.0}, mu)), -1.0 - 1.0);
  // Outside: state clipped to 2.
  EXPECT_DOUBLE_EQ(at(t2.drift(0.0, Vector{-7.0}, mu)), 2.0 - 1.0);
  EXPECT_EQ(t2.name(), "mean_field_ou@truncated");
  EXPECT_THROW(truncate(ou, 0.0), NonpositiveParameter);
}

TEST(Truncate, LargeLevelIsTransparent) {
  const auto cubic = preset_cubic(1.0, 2.0);
  const auto big = truncate(cubic, 1e9);
  const EmpiricalMeasure mu{0.3, -1.7, 2.5};
  for (double x : {-3.0, 0.1, 2.0})
    EXPECT_EQ(at(big.drift(0.0, Vector{x}, mu)), at(cubic.drift(0.0, Vector{x}, mu)));
  EXPECT_EQ(big.preferred_taming(), Taming::tamed);
}

TEST(CoefficientPair, FromPointwiseSeesWholeMeasure) {
  const auto pair = CoefficientPair::from_pointwise(
      1,
      [](double t, std::span<const double> x, const EmpiricalMeasure& mu, std::span<double> out) {
        out[0] = t + x[0] * static_cast<double>(mu.size());
      },
      [](double, std::span<const double>, const EmpiricalMeasure&, std::span<double> out) { out[0] = 3.0; });
  const EmpiricalMeasure mu{0.0, 0.0, 0.0};
  EXPECT_DOUBLE_EQ(at(pair.drift(0.5, Vector{2.0}, mu)), 6.5);
  EXPECT_DOUBLE_EQ(at(pair.diffusion(0.5, Vector{2.0}, mu)), 3.0);
}

}  // namespace
}  // namespace mvsde
