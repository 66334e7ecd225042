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
#include "mvsde/stats.hpp"

#include <algorithm>
#include <cmath>

#include "mvsde/error.hpp"

namespace mvsde {
namespace {

// Contiguous block boundaries with the remainder spread over the first blocks.
std::vector<std::size_t> block_bounds(std::size_t n, std::size_t blocks) {
  std::vector<std::size_t> bounds(blocks + 1, 0);
  const std::size_t base = n / blocks;
  const std::size_t extra = n % blocks;
  for (std::size_t b = 0; b < blocks; ++b) bounds[b + 1] = bounds[b] + base + (b < extra ? 1 : 0);
  return bounds;
}

double jackknife_stderr(const std::vector<double>& leave_out) {
  const double b = static_cast<double>(leave_out.size());
  double mean = 0.0;
  for (double v : leave_out) mean += v;
  mean /= b;
  double ss = 0.0;
  for (double v : leave_out) ss += (v - mean) * (v - mean);
  return std::sqrt((b - 1.0) / b * ss);
}

struct Moments {
  double n = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;

  void add(double x) {
    const double x2 = x * x;
    n += 1.0;
    s1 += x;
    s2 += x2;
    s3 += x2 * x;
    s4 += x2 * x2;
  }
  Moments minus(const Moments& o) const { return {n - o.n, s1 - o.s1, s2 - o.s2, s3 - o.s3, s4 - o.s4}; }

  double mean() const { return s1 / n; }
  double central2() const {
    const double m = mean();
    return s2 / n - m * m;
  }
  double central4() const {
    const double m = mean();
    return s4 / n - 4.0 * m * s3 / n + 6.0 * m * m * s2 / n - 3.0 * m * m * m * m;
  }
  double excess_kurtosis() const {
    const double v = central2();
    return v > 0.0 ? central4() / (v * v) - 3.0 : 0.0;
  }
};

}  // namespace

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidArgument("least_squares: x and y differ in length");
  const std::size_t n = x.size();
  if (n < 2) throw InvalidArgument("least_squares: need at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw InvalidArgument("least_squares: x values are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

MeanEstimate block_jackknife_mean(std::span<const double> values, std::size_t blocks) {
  const std::size_t n = values.size();
  if (n == 0) throw InvalidArgument("block_jackknife_mean: empty sample");
  double total = 0.0;
  for (double v : values) total += v;
  MeanEstimate est;
  est.mean = total / static_cast<double>(n);
  blocks = std::min(blocks, n);
  if (blocks < 2) return est;
  const auto bounds = block_bounds(n, blocks);
  std::vector<double> leave_out(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    double s = 0.0;
    for (std::size_t i = bounds[b]; i < bounds[b + 1]; ++i) s += values[i];
    leave_out[b] = (total - s) / static_cast<double>(n - (bounds[b + 1] - bounds[b]));
  }
  est.stderr_value = jackknife_stderr(leave_out);
  return est;
}

double sample_stddev(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  double m = 0.0;
  for (double v : values) m += v;
  m /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(n - 1));
}

ShapeSummary shape_summary(std::span<const double> values, std::size_t blocks) {
  const std::size_t n = values.size();
  if (n == 0) throw InvalidArgument("shape_summary: empty sample");
  // Shift by the first value to tame cancellation in the power sums.
  const double shift = values[0];
  Moments all;
  for (double v : values) all.add(v - shift);
  ShapeSummary out;
  out.mean = all.mean() + shift;
  out.variance = all.central2();
  out.excess_kurtosis = all.excess_kurtosis();
  blocks = std::min(blocks, n);
  if (blocks < 2) return out;
  const auto bounds = block_bounds(n, blocks);
  std::vector<double> jm(blocks), jv(blocks), jk(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    Moments part;
    for (std::size_t i = bounds[b]; i < bounds[b + 1]; ++i) part.add(values[i] - shift);
    const Moments rest = all.minus(part);
    jm[b] = rest.mean();
    jv[b] = rest.central2();
    jk[b] = rest.excess_kurtosis();
  }
  out.mean_stderr = jackknife_stderr(jm);
  out.variance_stderr = jackknife_stderr(jv);
  out.kurtosis_stderr = jackknife_stderr(jk);
  return out;
}

}  // namespace mvsde
