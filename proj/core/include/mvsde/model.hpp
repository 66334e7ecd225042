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

#include <cstddef>
#include <functional>
#include <span>
#include <string>

#include "mvsde/linalg.hpp"
#include "mvsde/measure.hpp"

namespace mvsde {

enum class Taming { none, tamed };

/// Drift and diffusion with the time and measure arguments already fixed.
///
/// `drift` writes d values, `diffusion` writes d*d row-major values. Both
/// callables must be re-entrant: particle loops call them concurrently.
class FrozenCoefficients {
 public:
  using Field = std::function<void(std::span<const double> x, std::span<double> out)>;

  FrozenCoefficients(std::size_t dim, Field drift, Field diffusion)
      : dim_(dim), drift_(std::move(drift)), diffusion_(std::move(diffusion)) {}

  std::size_t dim() const noexcept { return dim_; }

  void drift(std::span<const double> x, std::span<double> out) const { drift_(x, out); }
  void diffusion(std::span<const double> x, std::span<double> out) const { diffusion_(x, out); }

  Vector drift(std::span<const double> x) const;
  Matrix diffusion(std::span<const double> x) const;

 private:
  std::size_t dim_;
  Field drift_;
  Field diffusion_;
};

/// The coefficient pair b(t, x, mu), sigma(t, x, mu) of a distribution
/// dependent SDE on R^d.
///
/// Measure dependence is expressed through `bind(t, mu)`, which precomputes
/// whatever statistics of mu the coefficients need and returns pointwise
/// callables. The returned object may reference `mu`; it must not outlive it.
class CoefficientPair {
 public:
  using Binder = std::function<FrozenCoefficients(double t, const EmpiricalMeasure& mu)>;
  using PointwiseField =
      std::function<void(double t, std::span<const double> x, const EmpiricalMeasure& mu, std::span<double> out)>;

  CoefficientPair(std::size_t dim, Binder binder, std::string name = "custom",
                  Taming preferred_taming = Taming::none);

  /// Wraps plain (t, x, mu) callables. Each evaluation sees the full measure,
  /// so measure-dependent fields cost O(N) per particle.
  static CoefficientPair from_pointwise(std::size_t dim, PointwiseField drift, PointwiseField diffusion,
                                        std::string name = "custom");

  std::size_t dim() const noexcept { return dim_; }
  const std::string& name() const noexcept { return name_; }
  /// Stepping mode the model is meant to be run with (tamed for superlinear drift).
  Taming preferred_taming() const noexcept { return preferred_taming_; }

  FrozenCoefficients bind(double t, const EmpiricalMeasure& mu) const { return binder_(t, mu); }

  Vector drift(double t, std::span<const double> x, const EmpiricalMeasure& mu) const;
  Matrix diffusion(double t, std::span<const double> x, const EmpiricalMeasure& mu) const;

 private:
  std::size_t dim_;
  Binder binder_;
  std::string name_;
  Taming preferred_taming_;
};

/// b^n(t, x, mu) = b(t, phi_n(x), mu o phi_n^{-1}); same for sigma.
CoefficientPair truncate(const CoefficientPair& coeffs, double n);

/// dX = (-alpha X - E X) dt + dW (d = 1). Throws NonpositiveParameter if alpha <= 0.
CoefficientPair preset_mean_field_ou(double alpha);

/// dX = (-X^3 - X int ((L v |y|) ^ M) mu(dy)) dt + X/2 dW (d = 1).
/// Throws NonpositiveParameter unless L > 0, BadClipWindow if M < L.
CoefficientPair preset_cubic(double L, double M);

/// c(mu) = (1/N) sum_i min(max(L, |y_i|), M), the cubic model's clipped mean modulus.
double cubic_clip_mean(const EmpiricalMeasure& mu, double L, double M);

/// dX = -2 (X + alpha E X) dt + (X + alpha E X) dW (d = 1).
CoefficientPair preset_landau_linear(double alpha);

/// b(x, mu) = (1/N) sum_i b0(x - alpha z_i), sigma likewise with sigma0.
/// Cost is O(N) per evaluation.
CoefficientPair preset_landau_convolution(std::size_t dim, std::function<Vector(std::span<const double>)> b0,
                                          std::function<Matrix(std::span<const double>)> sigma0, double alpha);

}  // namespace mvsde
