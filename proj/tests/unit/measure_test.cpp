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
#include <cstdint>
#include <vector>

#include "mvsde/assignment.hpp"
#include "mvsde/error.hpp"
#include "mvsde/measure.hpp"
#include "mvsde/measure_io.hpp"
#include "mvsde/rng.hpp"
#include "oracles.hpp"

namespace mvsde {
namespace {

EmpiricalMeasure random_cloud(StreamSampler& s, std::size_t n, std::size_t d, double scale = 1.0) {
  std::vector<double> pts(n * d);
  for (double& v : pts) v = scale * s.normal();
  return {std::move(pts), d};
}

TEST(EmpiricalMeasure, RejectsMalformedInput) {
  EXPECT_THROW(EmpiricalMeasure(std::vector<double>{}, 1), InvalidArgument);
  EXPECT_THROW(EmpiricalMeasure(std::vector<double>{1.0, 2.0, 3.0}, 2), InvalidArgument);
  EXPECT_THROW(EmpiricalMeasure(std::vector<double>{1.0}, 0), InvalidArgument);
  EXPECT_THROW(EmpiricalMeasure({1.0, std::nan("")}), InvalidArgument);
  EXPECT_THROW(EmpiricalMeasure::from_rows({{1.0, 2.0}, {3.0}}), DimensionMismatch);
}

TEST(EmpiricalMeasure, MomentsAndMean) {
  const EmpiricalMeasure mu{-1.0, 1.0, 2.0, 2.0};
  EXPECT_DOUBLE_EQ(mu.mean()[0], 1.0);
  EXPECT_DOUBLE_EQ(mu.raw_abs_moment(2), 2.5);
  EXPECT_DOUBLE_EQ(moment(mu, 2), std::sqrt(2.5));
  EXPECT_THROW(moment(mu, 0.5), InvalidArgument);
}

TEST(Phi, ProjectsOntoBall) {
  const auto p = phi(std::vector<double>{3.0, 4.0}, 1.0);
  EXPECT_DOUBLE_EQ(p[0], 0.6);
  EXPECT_DOUBLE_EQ(p[1], 0.8);
  const auto q = phi(std::vector<double>{0.3, -0.4}, 1.0);
  EXPECT_EQ(q, (Vector{0.3, -0.4}));
  // On the line the projection lands exactly on the boundary.
  for (double x : {-7.3, 2.0 + 1e-9, 3.0e5}) EXPECT_EQ(phi(std::vector<double>{x}, 2.0)[0], x < 0 ? -2.0 : 2.0);
  EXPECT_THROW(pushforward_phi(EmpiricalMeasure{1.0}, 0.0), NonpositiveParameter);
}

TEST(Wasserstein, HandComputedOneDimensional) {
  // Sorted pairing (0,0),(1,2): W_1 = 1/2, W_2 = sqrt(1/2).
  const EmpiricalMeasure mu{1.0, 0.0}, nu{0.0, 2.0};
  EXPECT_DOUBLE_EQ(wasserstein(mu, nu, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(wasserstein(mu, nu, 2.0), std::sqrt(0.5));
}

TEST(Wasserstein, MatchesExhaustiveSearch) {
  StreamSampler s(17, 0);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t d = 1 + trial % 2;
    const std::size_t n = 2 + trial % 6;
    const double r = trial % 3 == 0 ? 1.0 : (trial % 3 == 1 ? 2.0 : 4.0);
    const auto mu = random_cloud(s, n, d);
    const auto nu = random_cloud(s, n, d, 2.0);
    const double want = testing::brute_force_wasserstein(mu, nu, r);
    EXPECT_LE(testing::relative_error(wasserstein(mu, nu, r), want), 1e-12) << "trial " << trial;
  }
}

TEST(Wasserstein, MetricProperties) {
  StreamSampler s(23, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = 1 + trial % 2;
    const auto a = random_cloud(s, 6, d), b = random_cloud(s, 6, d), c = random_cloud(s, 6, d);
    EXPECT_EQ(wasserstein(a, a, 2.0), 0.0);
    EXPECT_DOUBLE_EQ(wasserstein(a, b, 2.0), wasserstein(b, a, 2.0));
    EXPECT_LE(wasserstein(a, c, 2.0), wasserstein(a, b, 2.0) + wasserstein(b, c, 2.0) + 1e-12);
    // W_r is nondecreasing in r.
    EXPECT_LE(wasserstein(a, b, 1.0), wasserstein(a, b, 2.0) + 1e-12);
    EXPECT_LE(wasserstein(a, b, 2.0), wasserstein(a, b, 4.0) + 1e-12);
  }
}

TEST(Wasserstein, TranslationCostsItsLength) {
  StreamSampler s(29, 0);
  const auto a = random_cloud(s, 40, 2);
  std::vector<double> shifted(a.flat().begin(), a.flat().end());
  for (std::size_t i = 0; i < shifted.size(); i += 2) {
    shifted[i] += 3.0;
    shifted[i + 1] -= 4.0;
  }
  EXPECT_NEAR(wasserstein(a, EmpiricalMeasure(shifted, 2), 2.0), 5.0, 1e-12);
}

TEST(Wasserstein, ShapeErrors) {
  EXPECT_THROW(wasserstein(EmpiricalMeasure{1.0, 2.0}, EmpiricalMeasure{1.0}, 2.0), UnequalSupportSize);
  EXPECT_THROW(wasserstein(EmpiricalMeasure{1.0}, EmpiricalMeasure::from_rows({{1.0, 2.0}}), 2.0), DimensionMismatch);
  StreamSampler s(3, 0);
  const auto a = random_cloud(s, 10, 2), b = random_cloud(s, 10, 2);
  EXPECT_THROW(wasserstein(a, b, 2.0, 9), AssignmentTooLarge);
  EXPECT_NO_THROW(wasserstein(a, b, 2.0, 10));
  // The line uses sorting, so the limit does not apply.
  const auto c = random_cloud(s, 1000, 1), e = random_cloud(s, 1000, 1);
  EXPECT_NO_THROW(wasserstein(c, e, 2.0, 9));
}

TEST(Wasserstein, OptimalCouplingAttainsDistance) {
  StreamSampler s(31, 0);
  const auto a = random_cloud(s, 7, 2), b = random_cloud(s, 7, 2);
  const auto c = optimal_coupling(a, b, 2.0);
  EXPECT_NEAR(std::sqrt(c.cost(a, b, 2.0)), testing::brute_force_wasserstein(a, b, 2.0), 1e-12);
  EXPECT_GE(Coupling::identity(7).cost(a, b, 2.0), c.cost(a, b, 2.0) - 1e-15);
}

TEST(WassersteinLocal, LargeRadiusIsPlainDistance) {
  StreamSampler s(37, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_cloud(s, 9, 1), b = random_cloud(s, 9, 1, 3.0);
    EXPECT_EQ(wasserstein_local(a, b, 2.0, 1e6), wasserstein(a, b, 2.0));
  }
}

TEST(WassersteinLocal, MassBeyondRadiusOnOneSideVanishes) {
  const EmpiricalMeasure a{1.5, 2.0, 7.0}, b{3.0, 1.01, 100.0};
  EXPECT_EQ(wasserstein_local(a, b, 2.0, 1.0), 0.0);
  EXPECT_GT(wasserstein_local(a, EmpiricalMeasure{-1.5, 2.0, 7.0}, 2.0, 1.0), 0.0);
}

TEST(Assignment, MatchesExhaustiveSearchOnRandomCosts) {
  StreamSampler s(41, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + trial % 7;
    std::vector<double> cost(n * n);
    for (double& c : cost) c = s.uniform(-5.0, 5.0);
    const auto assignment = solve_assignment(cost, n);
    double got = 0.0;
    for (std::size_t i = 0; i < n; ++i) got += cost[i * n + assignment[i]];
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    double best = 1e300;
    do {
      double c = 0.0;
      for (std::size_t i = 0; i < n; ++i) c += cost[i * n + perm[i]];
      best = std::min(best, c);
    } while (std::next_permutation(perm.begin(), perm.end()));
    EXPECT_NEAR(got, best, 1e-12);
  }
  EXPECT_THROW(solve_assignment(std::vector<double>(5), 2), InvalidArgument);
}

TEST(MeasureIo, CsvRoundTripIsExact) {
  StreamSampler s(43, 0);
  const auto a = random_cloud(s, 25, 3);
  const std::string text = to_csv(a);
  EXPECT_EQ(measure_from_csv(text), a);
  EXPECT_EQ(to_csv(measure_from_csv(text)), text);
}

TEST(MeasureIo, JsonRoundTripIsExact) {
  StreamSampler s(47, 0);
  const auto a = random_cloud(s, 10, 2);
  EXPECT_EQ(measure_from_json(to_json(a)), a);
}

TEST(MeasureIo, FormatUsesSeventeenDigits) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(2.0), "2");
}

TEST(MeasureIo, MalformedInputIsParseError) {
  EXPECT_THROW(measure_from_csv("1,2\n3\n"), ParseError);
  EXPECT_THROW(measure_from_csv("1,x\n"), ParseError);
  EXPECT_THROW(measure_from_csv(""), ParseError);
  EXPECT_THROW(measure_from_json("{}"), ParseError);
  EXPECT_THROW(measure_from_json("[[1],[\"a\"]]"), ParseError);
}

}  // namespace
}  // namespace mvsde
