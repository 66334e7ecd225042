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
#include "mvsde/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "mvsde/error.hpp"
#include "mvsde/rng.hpp"

namespace mvsde {
namespace {

StreamSampler sampler_for(std::uint64_t seed, std::string_view label, std::uint64_t index) {
  return StreamSampler(splitmix64(split_seed(seed, label) + index), 0);
}

std::vector<double> mixture_points(const CloudFamily& f, std::size_t dim, StreamSampler& s) {
  const std::size_t k = std::max<std::size_t>(f.components, 1);
  std::vector<double> means(k * dim);
  std::vector<double> scales(k);
  for (auto& m : means) m = s.uniform(f.mean_lo, f.mean_hi);
  for (auto& sc : scales) sc = s.uniform(f.scale_lo, f.scale_hi);
  std::vector<double> pts(f.cloud_size * dim);
  for (std::size_t i = 0; i < f.cloud_size; ++i) {
    const std::size_t c = s.below(k);
    for (std::size_t j = 0; j < dim; ++j) pts[i * dim + j] = means[c * dim + j] + scales[c] * s.normal();
  }
  return pts;
}

}  // namespace

EmpiricalMeasure sample_cloud(const CloudFamily& family, std::size_t dim, std::uint64_t seed, std::uint64_t index) {
  if (family.cloud_size == 0) throw InvalidArgument("cloud family with zero cloud_size");
  if (dim == 0) throw InvalidArgument("cloud dimension must be positive");
  auto s = sampler_for(seed, "sampling.cloud", index);
  const bool stress = family.stress_every > 0 && index % family.stress_every == family.stress_every - 1;
  if (!stress) return EmpiricalMeasure(mixture_points(family, dim, s), dim);

  switch ((index / family.stress_every) % 3) {
    case 0:
      return EmpiricalMeasure(std::vector<double>(family.cloud_size * dim, 0.0), dim);
    case 1: {
      std::vector<double> centre(dim);
      for (auto& c : centre) c = s.uniform(family.mean_lo, family.mean_hi);
      std::vector<double> pts(family.cloud_size * dim);
      for (std::size_t i = 0; i < family.cloud_size; ++i)
        for (std::size_t j = 0; j < dim; ++j) pts[i * dim + j] = centre[j] + 1e-6 * s.normal();
      return EmpiricalMeasure(std::move(pts), dim);
    }
    default: {
      auto pts = mixture_points(family, dim, s);
      for (auto& p : pts) p *= family.dilation;
      return EmpiricalMeasure(std::move(pts), dim);
    }
  }
}

EmpiricalMeasure gaussian_cloud(std::size_t n, std::size_t dim, double mean, double std, std::uint64_t seed,
                                bool symmetric) {
  if (n == 0 || dim == 0) throw InvalidArgument("gaussian_cloud needs n > 0 and dim > 0");
  if (symmetric && n % 2 != 0) throw InvalidArgument("symmetric gaussian_cloud needs an even n");
  auto s = sampler_for(seed, "sampling.gaussian", 0);
  std::vector<double> pts(n * dim);
  const std::size_t free = symmetric ? n / 2 : n;
  for (std::size_t i = 0; i < free * dim; ++i) pts[i] = mean + std * s.normal();
  if (symmetric)
    for (std::size_t i = 0; i < free * dim; ++i) pts[free * dim + i] = 2.0 * mean - pts[i];
  return EmpiricalMeasure(std::move(pts), dim);
}

std::vector<double> sample_in_ball(std::size_t dim, double r, std::uint64_t seed, std::uint64_t index) {
  if (dim == 0) throw InvalidArgument("ball dimension must be positive");
  if (!(r > 0.0)) throw NonpositiveParameter("ball radius must be positive");
  auto s = sampler_for(seed, "sampling.ball", index);
  std::vector<double> x(dim);
  if (dim == 1) {
    x[0] = s.uniform(-r, r);
    return x;
  }
  double nrm = 0.0;
  for (auto& v : x) {
    v = s.normal();
    nrm += v * v;
  }
  nrm = std::sqrt(nrm);
  const double radius = r * std::pow(s.uniform(), 1.0 / static_cast<double>(dim));
  for (auto& v : x) v *= radius / nrm;
  return x;
}

std::vector<std::size_t> random_permutation(std::size_t n, std::uint64_t seed, std::uint64_t index) {
  std::vector<std::size_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  auto s = sampler_for(seed, "sampling.permutation", index);
  for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[s.below(i)]);
  return p;
}

}  // namespace mvsde
