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
#include "mvsde/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mvsde/assignment.hpp"
#include "mvsde/error.hpp"

namespace mvsde {
namespace {

inline double pow_r(double d, double r) {
  if (r == 1.0) return d;
  if (r == 2.0) return d * d;
  return std::pow(d, r);
}

void check_order(double r) {
  if (!(r >= 1.0) || !std::isfinite(r)) throw InvalidArgument("moment order r must be a finite value >= 1");
}

void check_compatible(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) {
  if (mu.dim() != nu.dim())
    throw DimensionMismatch("clouds live in R^" + std::to_string(mu.dim()) + " and R^" + std::to_string(nu.dim()));
  if (mu.size() != nu.size())
    throw UnequalSupportSize("clouds have " + std::to_string(mu.size()) + " and " + std::to_string(nu.size()) +
                             " points; only equal sizes are supported");
}

std::vector<std::size_t> sorted_order(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  return idx;
}

}  // namespace

EmpiricalMeasure::EmpiricalMeasure(std::vector<double> points, std::size_t dim) : points_(std::move(points)), dim_(dim) {
  if (dim_ == 0) throw InvalidArgument("dimension must be positive");
  if (points_.empty()) throw InvalidArgument("an empirical measure needs at least one point");
  if (points_.size() % dim_ != 0) throw InvalidArgument("coordinate count is not a multiple of the dimension");
  for (double v : points_)
    if (!std::isfinite(v)) throw InvalidArgument("empirical measure points must be finite");
}

EmpiricalMeasure::EmpiricalMeasure(std::initializer_list<double> points) : EmpiricalMeasure(std::vector<double>(points), 1) {}

EmpiricalMeasure EmpiricalMeasure::from_scalars(std::vector<double> points) { return {std::move(points), 1}; }

EmpiricalMeasure EmpiricalMeasure::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw InvalidArgument("an empirical measure needs at least one point");
  const std::size_t d = rows.front().size();
  std::vector<double> flat;
  flat.reserve(rows.size() * d);
  for (const auto& row : rows) {
    if (row.size() != d) throw DimensionMismatch("rows of different dimension");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return {std::move(flat), d};
}

EmpiricalMeasure EmpiricalMeasure::dirac_origin(std::size_t n, std::size_t dim) {
  return {std::vector<double>(n * dim, 0.0), dim};
}

Vector EmpiricalMeasure::mean() const {
  Vector m(dim_, 0.0);
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < dim_; ++k) m[k] += points_[i * dim_ + k];
  for (double& v : m) v /= static_cast<double>(n);
  return m;
}

double EmpiricalMeasure::raw_abs_moment(double p) const {
  const std::size_t n = size();
  double s = 0.0;
  if (dim_ == 1) {
    for (double v : points_) s += pow_r(std::abs(v), p);
  } else {
    for (std::size_t i = 0; i < n; ++i) s += pow_r(norm(point(i)), p);
  }
  return s / static_cast<double>(n);
}

EmpiricalMeasure EmpiricalMeasure::scaled(double c) const {
  std::vector<double> p = points_;
  for (double& v : p) v *= c;
  return {std::move(p), dim_};
}

Coupling Coupling::identity(std::size_t n) {
  Coupling c;
  c.pairing.resize(n);
  std::iota(c.pairing.begin(), c.pairing.end(), std::size_t{0});
  return c;
}

double Coupling::cost(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, double r) const {
  check_compatible(mu, nu);
  if (pairing.size() != mu.size()) throw InvalidArgument("coupling size does not match the clouds");
  double s = 0.0;
  for (std::size_t i = 0; i < pairing.size(); ++i) s += pow_r(distance(mu.point(i), nu.point(pairing[i])), r);
  return s / static_cast<double>(pairing.size());
}

double moment(const EmpiricalMeasure& mu, double r) {
  check_order(r);
  return std::pow(mu.raw_abs_moment(r), 1.0 / r);
}

void phi_inplace(std::span<double> x, double n) noexcept {
  const double len = norm(x);
  if (len <= n) return;
  // Normalise first so that on the line the image is exactly +-n.
  for (double& v : x) v = n * (v / len);
}

Vector phi(std::span<const double> x, double n) {
  if (!(n > 0.0)) throw NonpositiveParameter("truncation level must be positive");
  Vector out(x.begin(), x.end());
  phi_inplace(out, n);
  return out;
}

EmpiricalMeasure pushforward_phi(const EmpiricalMeasure& mu, double n) {
  if (!(n > 0.0)) throw NonpositiveParameter("truncation level must be positive");
  std::vector<double> p(mu.flat().begin(), mu.flat().end());
  const std::size_t d = mu.dim();
  for (std::size_t i = 0; i < mu.size(); ++i) phi_inplace(std::span<double>(p.data() + i * d, d), n);
  return {std::move(p), d};
}

Coupling optimal_coupling(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, double r,
                          std::size_t assignment_limit) {
  check_order(r);
  check_compatible(mu, nu);
  const std::size_t n = mu.size();
  Coupling c;
  c.pairing.resize(n);
  if (mu.dim() == 1) {
    // Monotone rearrangement is optimal on the line for convex costs.
    const auto ix = sorted_order(mu.flat());
    const auto iy = sorted_order(nu.flat());
    for (std::size_t k = 0; k < n; ++k) c.pairing[ix[k]] = iy[k];
    return c;
  }
  if (n > assignment_limit)
    throw AssignmentTooLarge("exact W_r in d > 1 is limited to " + std::to_string(assignment_limit) +
                             " points; got " + std::to_string(n));
  std::vector<double> cost(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) cost[i * n + j] = pow_r(distance(mu.point(i), nu.point(j)), r);
  c.pairing = solve_assignment(cost, n);
  return c;
}

double wasserstein(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, double r, std::size_t assignment_limit) {
  check_order(r);
  check_compatible(mu, nu);
  if (mu.dim() == 1) {
    std::vector<double> a(mu.flat().begin(), mu.flat().end());
    std::vector<double> b(nu.flat().begin(), nu.flat().end());
    std::stable_sort(a.begin(), a.end());
    std::stable_sort(b.begin(), b.end());
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += pow_r(std::abs(a[k] - b[k]), r);
    return std::pow(s / static_cast<double>(a.size()), 1.0 / r);
  }
  const Coupling c = optimal_coupling(mu, nu, r, assignment_limit);
  return std::pow(c.cost(mu, nu, r), 1.0 / r);
}

double wasserstein_local(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, double r, double n,
                         std::size_t assignment_limit) {
  check_compatible(mu, nu);
  return wasserstein(pushforward_phi(mu, n), pushforward_phi(nu, n), r, assignment_limit);
}

}  // namespace mvsde
