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
#include "mvsde/rng.hpp"

#include <cmath>

#include <boost/random/normal_distribution.hpp>

namespace mvsde {
namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

// 53-bit uniform strictly inside (0, 1).
inline double to_open_unit(std::uint32_t hi, std::uint32_t lo) noexcept {
  const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

}  // namespace

// Philox blocks for one (stream, index) viewed as a stream of 64-bit words;
// the block word of the counter advances as words are consumed.
class CounterRng::BlockEngine {
 public:
  using result_type = std::uint64_t;

  BlockEngine(Philox4x32::Key key, std::uint64_t index, std::uint32_t stream) noexcept
      : key_(key), ctr_{static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), stream, 0} {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept {
    if (left_ == 0) {
      block_ = Philox4x32::generate(ctr_, key_);
      ++ctr_[3];
      left_ = 2;
    }
    const int k = 2 - left_--;
    return (static_cast<std::uint64_t>(block_[2 * k]) << 32) | block_[2 * k + 1];
  }

 private:
  Philox4x32::Key key_;
  Philox4x32::Counter ctr_;
  Philox4x32::Counter block_{};
  int left_ = 0;
};

Philox4x32::Counter Philox4x32::generate(Counter ctr, Key key) noexcept {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
    mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kPhiloxW0;
    key[1] += kPhiloxW1;
  }
  return ctr;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t split_seed(std::uint64_t seed, std::string_view label) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return splitmix64(seed ^ h);
}

CounterRng::CounterRng(std::uint64_t seed) noexcept
    : seed_(seed), key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

void CounterRng::normals(std::uint32_t stream, std::uint64_t index, std::span<double> out) const noexcept {
  BlockEngine eng(key_, index, stream);
  boost::random::normal_distribution<double> unit;
  for (auto& v : out) v = unit(eng);
}

void CounterRng::uniforms(std::uint32_t stream, std::uint64_t index, std::span<double> out) const noexcept {
  const auto lo = static_cast<std::uint32_t>(index);
  const auto hi = static_cast<std::uint32_t>(index >> 32);
  for (std::size_t k = 0, block = 0; k < out.size(); k += 2, ++block) {
    const auto r = Philox4x32::generate({lo, hi, stream, static_cast<std::uint32_t>(block)}, key_);
    out[k] = to_open_unit(r[0], r[1]);
    if (k + 1 < out.size()) out[k + 1] = to_open_unit(r[2], r[3]);
  }
}

void StreamSampler::refill_uniform() noexcept {
  rng_.uniforms(stream_, next_index_++, ubuf_);
  uleft_ = 2;
}

void StreamSampler::refill_normal() noexcept {
  rng_.normals(stream_, next_index_++, nbuf_);
  nleft_ = 2;
}

double StreamSampler::uniform() noexcept {
  if (uleft_ == 0) refill_uniform();
  return ubuf_[2 - uleft_--];
}

double StreamSampler::normal() noexcept {
  if (nleft_ == 0) refill_normal();
  return nbuf_[2 - nleft_--];
}

std::uint64_t StreamSampler::below(std::uint64_t n) noexcept {
  if (n <= 1) return 0;
  const auto k = static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
  return k < n ? k : n - 1;
}

}  // namespace mvsde
