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

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

namespace mvsde {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// A draw is a pure function of (key, counter): there is no hidden state, so
/// any particle at any step can be regenerated independently of execution order.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter ctr, Key key) noexcept;
};

/// Derives an independent 64-bit seed for a named purpose ("simulate.noise",
/// "invariant.bootstrap", ...). splitmix64(seed ^ fnv1a64(label)).
std::uint64_t split_seed(std::uint64_t seed, std::string_view label) noexcept;

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Addressable normal/uniform source. Counter layout:
///   word 0,1 = `index` (64 bit, e.g. the step number)
///   word 2   = `stream` (e.g. the particle id)
///   word 3   = block number within one (stream, index) draw
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }

  /// Fills `out` with iid standard normals for (stream, index): ziggurat
  /// sampling over the (stream, index) block sequence, one 64-bit word per
  /// normal outside the rare rejection path.
  void normals(std::uint32_t stream, std::uint64_t index, std::span<double> out) const noexcept;

  /// Fills `out` with iid uniforms in the open interval (0, 1).
  void uniforms(std::uint32_t stream, std::uint64_t index, std::span<double> out) const noexcept;

 private:
  class BlockEngine;

  std::uint64_t seed_;
  Philox4x32::Key key_;
};

/// Sequential view over one CounterRng stream: successive calls advance the
/// index. Used wherever a single logical consumer needs many draws.
class StreamSampler {
 public:
  StreamSampler(std::uint64_t seed, std::uint32_t stream) noexcept : rng_(seed), stream_(stream) {}

  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  double normal() noexcept;
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) noexcept;

 private:
  void refill_uniform() noexcept;
  void refill_normal() noexcept;

  CounterRng rng_;
  std::uint32_t stream_;
  std::uint64_t next_index_ = 0;
  std::array<double, 2> ubuf_{};
  std::array<double, 2> nbuf_{};
  int uleft_ = 0;
  int nleft_ = 0;
};

}  // namespace mvsde
