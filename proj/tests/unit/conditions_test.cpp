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

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "json.hpp"
#include "mvsde/conditions.hpp"
#include "mvsde/error.hpp"
#include "mvsde/model.hpp"

namespace mvsde {
namespace {

using Field = CoefficientPair::PointwiseField;

CoefficientPair pointwise(Field b, Field s) { return CoefficientPair::from_pointwise(1, std::move(b), std::move(s)); }

Field constant(double c) {
  return [c](double, std::span<const double>, const EmpiricalMeasure&, std::span<double> out) { out[0] = c; };
}

CoefficientPair explosive() {
  return pointwise([](double, std::span<const double> x, const EmpiricalMeasure&,
                      std::span<double> out) { out[0] = x[0] * x[0] * x[0]; },
                   constant(1.0));
}

SampleDesign small_design(std::size_t n_points = 100) {
  SampleDesign d;
  d.n_points = n_points;
  d.seed = 3;
  return d;
}

TEST(Assumption, NamesRoundTrip) {
  for (auto a : {Assumption::A1, Assumption::A2, Assumption::A3, Assumption::A4, Assumption::B1, Assumption::B2,
                 Assumption::B3, Assumption::H}) {
    EXPECT_EQ(parse_assumption(to_string(a)), a);
  }
  EXPECT_EQ(parse_assumption("h"), Assumption::H);
  EXPECT_THROW(parse_assumption("A9"), InvalidArgument);
}

TEST(SampleDesign, Validation) {
  SampleDesign d;
  EXPECT_NO_THROW(d.validate());
  d.radius_grid = {2.0, 1.0};
  EXPECT_THROW(d.validate(), InvalidArgument);
  d.radius_grid = {-1.0};
  EXPECT_THROW(d.validate(), NonpositiveParameter);
  d = SampleDesign{};
  d.n_points = 0;
  EXPECT_THROW(d.validate(), InvalidArgument);
}

TEST(MeanFieldOu, LipschitzConstantBelowAnalyticBound) {
  const double alpha = 1.0;
  const auto rep = check_local_lipschitz(preset_mean_field_ou(alpha), small_design());
  EXPECT_FALSE(rep.violated);
  EXPECT_LE(rep.best_constant, alpha + 1.0 + 1e-9);
  // The sampled sup approaches max(alpha, 1) against the |x - y| + W_r denominator.
  EXPECT_GT(rep.best_constant, 0.9 * std::max(alpha, 1.0));
  EXPECT_EQ(rep.per_radius.size(), 4u);
}

TEST(MeanFieldOu, GrowthConstantBelowAnalyticBound) {
  const auto rep = check_growth(preset_mean_field_ou(1.0), small_design());
  EXPECT_FALSE(rep.violated);
  EXPECT_LE(rep.best_constant, 1.0 + 1e-9);
}

TEST(MeanFieldOu, ContinuousInMeasure) {
  const auto rep = check_continuity_in_measure(preset_mean_field_ou(1.0), small_design(40));
  EXPECT_FALSE(rep.violated);
  EXPECT_LE(rep.best_constant, 1e-6);
}

TEST(MeanFieldOu, StronglyMonotone) {
  const double alpha = 1.0;
  const auto rep = check_strong_monotonicity(preset_mean_field_ou(alpha), small_design());
  EXPECT_FALSE(rep.violated);
  EXPECT_GE(rep.best_constant, 2.0 * alpha - 1e-9);
  ASSERT_EQ(rep.coupling_ratios.size(), 3u);
  for (double r : rep.coupling_ratios) EXPECT_LE(r, -alpha + 1e-9);
}

TEST(MeanFieldOu, DecayConstantIsAMeasuredFixture) {
  const auto rep = check_local_with_decay(preset_mean_field_ou(1.0), small_design(), 1.0, 1.0);
  // Recorded from the seeded design; the sampler and quantity are deterministic.
  EXPECT_NEAR(rep.best_constant, 28.802967266379138, 1e-9 * 28.8);
  EXPECT_TRUE(rep.violated);
  EXPECT_FALSE(check_local_with_decay(preset_mean_field_ou(1.0), small_design(), 1e6, 1.0).violated);
  EXPECT_GT(rep.witness.scale, 0.0);
  EXPECT_THROW(check_local_with_decay(preset_mean_field_ou(1.0), small_design(), 0.0, 1.0), NonpositiveParameter);
  EXPECT_THROW(check_local_with_decay(preset_mean_field_ou(1.0), small_design(), 1.0, 1.0, Assumption::H),
               InvalidArgument);
}

TEST(LandauLinear, MonotoneWithMarginBeyondContraction) {
  const double alpha = 0.25;
  const auto rep = check_strong_monotonicity(preset_landau_linear(alpha), small_design());
  EXPECT_FALSE(rep.violated);
  EXPECT_GE(rep.best_constant, 2.0 - 2.0 * alpha);
}

TEST(Cubic, GrowthBoundedLipschitzGrowsQuadratically) {
  const auto cubic = preset_cubic(1.0, 2.0);
  const auto growth = check_growth(cubic, small_design());
  EXPECT_FALSE(growth.violated);
  EXPECT_LE(growth.best_constant, 1.0);
  // The local constant behaves like 3 N^2 on the ball of radius N.
  const auto lip = check_local_lipschitz(cubic, small_design(), false);
  EXPECT_TRUE(lip.violated);
  const double slope = std::log(lip.per_radius[3] / lip.per_radius[2]) / std::log(2.0);
  EXPECT_NEAR(slope, 2.0, 0.3);
}

TEST(Explosive, GrowthViolatedWithReplayableWitness) {
  const auto rep = check_growth(explosive(), small_design());
  EXPECT_TRUE(rep.violated);
  EXPECT_GT(rep.best_constant, 10.0);
  EXPECT_EQ(replay_witness(explosive(), rep, 2.0), rep.witness.value);
}

TEST(Degenerate, ZeroCoefficients) {
  const auto zero = pointwise(constant(0.0), constant(0.0));
  EXPECT_EQ(check_local_lipschitz(zero, small_design()).best_constant, 0.0);
  // Zero drift and constant noise give ratio 0, so no positive C_1 exists.
  const auto flat = pointwise(constant(0.0), constant(1.0));
  const auto h = check_strong_monotonicity(flat, small_design(20));
  EXPECT_TRUE(h.violated);
  EXPECT_EQ(h.best_constant, 0.0);
}

TEST(Continuity, IndicatorOfMeasureIsDiscontinuous) {
  // b = 1 when some particle sits off the origin; the stress family includes
  // the exact Dirac at 0, where every perturbation jumps by 1.
  const auto jump = pointwise(
      [](double, std::span<const double>, const EmpiricalMeasure& mu, std::span<double> out) {
        out[0] = mu.raw_abs_moment(1.0) > 0.0 ? 1.0 : 0.0;
      },
      constant(1.0));
  const auto rep = check_continuity_in_measure(jump, small_design(40));
  EXPECT_TRUE(rep.violated);
  EXPECT_EQ(replay_witness(jump, rep, 2.0), rep.witness.value);
}

TEST(Continuity, MeasureFreeCoefficientsPassTrivially) {
  const auto rep = check_continuity_in_measure(explosive(), small_design(10));
  EXPECT_FALSE(rep.violated);
  EXPECT_EQ(rep.best_constant, 0.0);
}

TEST(Replay, EveryWitnessReplaysBitExactly) {
  const auto ou = preset_mean_field_ou(1.0);
  const auto design = small_design(30);
  const std::vector<MarginReport> reports{
      check_local_lipschitz(ou, design),       check_local_lipschitz(ou, design, false),
      check_growth(ou, design),                check_growth(ou, design, GrowthForm::B2),
      check_continuity_in_measure(ou, design), check_local_with_decay(ou, design, 1.0, 1.0),
      check_local_with_decay(ou, design, 1.0, 1.0, Assumption::B3), check_strong_monotonicity(ou, design)};
  for (const auto& rep : reports)
    EXPECT_EQ(replay_witness(ou, rep, design.r), rep.witness.value) << to_string(rep.assumption);
}

TEST(Reports, DeterministicForFixedSeed) {
  const auto a = check_growth(preset_cubic(1.0, 2.0), small_design(50));
  const auto b = check_growth(preset_cubic(1.0, 2.0), small_design(50));
  EXPECT_EQ(a.best_constant, b.best_constant);
  EXPECT_EQ(a.witness.x, b.witness.x);
  auto other = small_design(50);
  other.seed = 4;
  EXPECT_NE(check_growth(preset_cubic(1.0, 2.0), other).witness.x, a.witness.x);
}

TEST(Reports, JsonLayout) {
  const auto rep = check_growth(explosive(), small_design(20));
  const auto j = nlohmann::json::parse(rep.to_json("mu.csv", ""));
  EXPECT_EQ(j["assumption"], "A2");
  EXPECT_TRUE(j["violated"].get<bool>());
  EXPECT_EQ(j["witness"]["mu_file"], "mu.csv");
  EXPECT_TRUE(j["witness"]["nu_file"].is_null());
  for (const char* key : {"t", "x", "y"}) EXPECT_TRUE(j["witness"].contains(key)) << key;
  EXPECT_TRUE(j.contains("skipped"));
  EXPECT_TRUE(j.contains("best_constant"));
}

}  // namespace
}  // namespace mvsde
