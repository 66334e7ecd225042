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
#include <set>
#include <vector>

#include "mvsde/rng.hpp"

namespace mvsde {
namespace {

TEST(Philox, KnownAnswerZero) {
  const auto out = Philox4x32::generate({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out, (Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
}

TEST(Philox, KnownAnswerOnes) {
  const auto out = Philox4x32::generate({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                        {0xffffffffu, 0xffffffffu});
  EXPECT_EQ(out, (Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
}

TEST(Philox, KnownAnswerPiDigits) {
  const auto out = Philox4x32::generate({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                        {0xa4093822u, 0x299f31d0u});
  EXPECT_EQ(out, (Philox4x32::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(SplitMix, FirstOutputOfZeroState) { EXPECT_EQ(splitmix64(0), 0xe220a8397b1dcdafULL); }

TEST(SplitSeed, LabelsGiveDistinctKeys) {
  std::set<std::uint64_t> keys;
  for (const char* label : {"a", "b", "init", "noise", "simulate.noise"}) keys.insert(split_seed(42, label));
  EXPECT_EQ(keys.size(), 5u);
  EXPECT_EQ(split_seed(42, "init"), split_seed(42, "init"));
  EXPECT_NE(split_seed(42, "init"), split_seed(43, "init"));
}

TEST(CounterRng, SameCounterSameDraws) {
  const CounterRng a(7), b(7);
  std::vector<double> x(9), y(9);
  a.normals(3, 11, x);
  b.normals(3, 11, y);
  EXPECT_EQ(x, y);
  a.uniforms(3, 11, x);
  b.uniforms(3, 11, y);
  EXPECT_EQ(x, y);
}

TEST(CounterRng, PrefixStable) {
  // A shorter request is a prefix of a longer one for the same counter.
  const CounterRng rng(99);
  std::vector<double> shortv(3), longv(8);
  rng.normals(0, 5, shortv);
  rng.normals(0, 5, longv);
  for (std::size_t i = 0; i < shortv.size(); ++i) EXPECT_EQ(shortv[i], longv[i]);
}

TEST(CounterRng, StreamsAndIndicesDiffer) {
  const CounterRng rng(1);
  std::vector<double> a(4), b(4), c(4);
  rng.normals(0, 0, a);
  rng.normals(1, 0, b);
  rng.normals(0, 1, c);
  EXPECT_NE(a, b);
  EXPECT_NE(a, c);
}

TEST(CounterRng, NormalMomentsMatchStandardGaussian) {
  const CounterRng rng(2024);
  constexpr std::size_t kStreams = 20000;
  std::vector<double> buf(5);
  double s1 = 0.0, s2 = 0.0, s4 = 0.0;
  for (std::uint32_t k = 0; k < kStreams; ++k) {
    rng.normals(k, 0, buf);
    for (double v : buf) {
      s1 += v;
      s2 += v * v;
      s4 += v * v * v * v;
    }
  }
  const double n = static_cast<double>(kStreams * buf.size());
  // Standard errors: 1/sqrt(n), sqrt(2/n), sqrt(96/n).
  EXPECT_NEAR(s1 / n, 0.0, 5.0 / std::sqrt(n));
  EXPECT_NEAR(s2 / n, 1.0, 5.0 * std::sqrt(2.0 / n));
  EXPECT_NEAR(s4 / n, 3.0, 5.0 * std::sqrt(96.0 / n));
}

TEST(CounterRng, UniformsInOpenUnitInterval) {
  const CounterRng rng(5);
  std::vector<double> u(1000);
  double sum = 0.0;
  for (std::uint32_t k = 0; k < 100; ++k) {
    rng.uniforms(k, k, u);
    for (double v : u) {
      ASSERT_GT(v, 0.0);
      ASSERT_LT(v, 1.0);
      sum += v;
    }
  }
  EXPECT_NEAR(sum / 1e5, 0.5, 5.0 * std::sqrt(1.0 / 12.0 / 1e5));
}

TEST(StreamSampler, BelowStaysInRangeAndCoversIt) {
  StreamSampler s(3, 0);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 7000; ++i) {
    const auto v = s.below(7);
    ASSERT_LT(v, 7u);
    ++hits[v];
  }
  for (int h : hits) EXPECT_GT(h, 800);
}

TEST(StreamSampler, ReproducibleSequence) {
  StreamSampler a(11, 2), b(11, 2);
  for (int i = 0; i < 50; ++i) {
    EXPECT_EQ(a.normal(), b.normal());
    EXPECT_EQ(a.uniform(), b.uniform());
  }
}

}  // namespace
}  // namespace mvsde
