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
#include "mvsde/model.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "mvsde/error.hpp"

namespace mvsde {

Vector FrozenCoefficients::drift(std::span<const double> x) const {
  Vector out(dim_);
  drift_(x, out);
  return out;
}

Matrix FrozenCoefficients::diffusion(std::span<const double> x) const {
  Matrix out(dim_, dim_);
  diffusion_(x, out.data);
  return out;
}

CoefficientPair::CoefficientPair(std::size_t dim, Binder binder, std::string name, Taming preferred_taming)
    : dim_(dim), binder_(std::move(binder)), name_(std::move(name)), preferred_taming_(preferred_taming) {
  if (dim_ == 0) throw InvalidArgument("coefficient dimension must be positive");
  if (!binder_) throw InvalidArgument("coefficient binder is empty");
}

CoefficientPair CoefficientPair::from_pointwise(std::size_t dim, PointwiseField drift, PointwiseField diffusion,
                                                std::string name) {
  auto b = std::make_shared<const PointwiseField>(std::move(drift));
  auto s = std::make_shared<const PointwiseField>(std::move(diffusion));
  return CoefficientPair(
      dim,
      [dim, b, s](double t, const EmpiricalMeasure& mu) {
        const EmpiricalMeasure* m = &mu;
        return FrozenCoefficients(
            dim, [b, t, m](std::span<const double> x, std::span<double> out) { (*b)(t, x, *m, out); },
            [s, t, m](std::span<const double> x, std::span<double> out) { (*s)(t, x, *m, out); });
      },
      std::move(name));
}

Vector CoefficientPair::drift(double t, std::span<const double> x, const EmpiricalMeasure& mu) const {
  return bind(t, mu).drift(x);
}

Matrix CoefficientPair::diffusion(double t, std::span<const double> x, const EmpiricalMeasure& mu) const {
  return bind(t, mu).diffusion(x);
}

CoefficientPair truncate(const CoefficientPair& coeffs, double n) {
  if (!(n > 0.0)) throw NonpositiveParameter("truncation level must be positive");
  const std::size_t d = coeffs.dim();
  auto inner = std::make_shared<const CoefficientPair>(coeffs);
  return CoefficientPair(
      d,
      [inner, n, d](double t, const EmpiricalMeasure& mu) {
        // The clipped cloud must outlive the inner frozen callables that may
        // reference it.
        auto clipped = std::make_shared<const EmpiricalMeasure>(pushforward_phi(mu, n));
        auto frozen = std::make_shared<const FrozenCoefficients>(inner->bind(t, *clipped));
        auto clip = [n, d](std::span<const double> x, double* buf) {
          std::copy(x.begin(), x.end(), buf);
          phi_inplace(std::span<double>(buf, d), n);
        };
        return FrozenCoefficients(
            d,
            [clipped, frozen, clip, d](std::span<const double> x, std::span<double> out) {
              double small[8];
              std::vector<double> big;
              double* buf = small;
              if (d > 8) {
                big.resize(d);
                buf = big.data();
              }
              clip(x, buf);
              frozen->drift(std::span<const double>(buf, d), out);
            },
            [clipped, frozen, clip, d](std::span<const double> x, std::span<double> out) {
              double small[8];
              std::vector<double> big;
              double* buf = small;
              if (d > 8) {
                big.resize(d);
                buf = big.data();
              }
              clip(x, buf);
              frozen->diffusion(std::span<const double>(buf, d), out);
            });
      },
      coeffs.name() + "@truncated", coeffs.preferred_taming());
}

CoefficientPair preset_mean_field_ou(double alpha) {
  if (!(alpha > 0.0)) throw NonpositiveParameter("mean-field OU requires alpha > 0");
  return CoefficientPair(
      1,
      [alpha](double, const EmpiricalMeasure& mu) {
        const double m = mu.mean()[0];
        return FrozenCoefficients(
            1, [alpha, m](std::span<const double> x, std::span<double> out) { out[0] = -alpha * x[0] - m; },
            [](std::span<const double>, std::span<double> out) { out[0] = 1.0; });
      },
      "mean_field_ou");
}

double cubic_clip_mean(const EmpiricalMeasure& mu, double L, double M) {
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) s += std::min(std::max(L, norm(mu.point(i))), M);
  return s / static_cast<double>(mu.size());
}

CoefficientPair preset_cubic(double L, double M) {
  if (!(L > 0.0)) throw NonpositiveParameter("cubic model requires L > 0");
  if (!(M >= L)) throw BadClipWindow("cubic model requires M >= L so that (L v |x|) ^ M is a clip window");
  return CoefficientPair(
      1,
      [L, M](double, const EmpiricalMeasure& mu) {
        const double c = cubic_clip_mean(mu, L, M);
        return FrozenCoefficients(
            1,
            [c](std::span<const double> x, std::span<double> out) {
              const double v = x[0];
              out[0] = -v * v * v - v * c;
            },
            [](std::span<const double> x, std::span<double> out) { out[0] = 0.5 * x[0]; });
      },
      "cubic", Taming::tamed);
}

CoefficientPair preset_landau_linear(double alpha) {
  return CoefficientPair(
      1,
      [alpha](double, const EmpiricalMeasure& mu) {
        const double shift = alpha * mu.mean()[0];
        return FrozenCoefficients(
            1, [shift](std::span<const double> x, std::span<double> out) { out[0] = -2.0 * (x[0] + shift); },
            [shift](std::span<const double> x, std::span<double> out) { out[0] = x[0] + shift; });
      },
      "landau_linear");
}

CoefficientPair preset_landau_convolution(std::size_t dim, std::function<Vector(std::span<const double>)> b0,
                                          std::function<Matrix(std::span<const double>)> sigma0, double alpha) {
  auto b = std::make_shared<const std::function<Vector(std::span<const double>)>>(std::move(b0));
  auto s = std::make_shared<const std::function<Matrix(std::span<const double>)>>(std::move(sigma0));
  return CoefficientPair(
      dim,
      [dim, b, s, alpha](double, const EmpiricalMeasure& mu) {
        const EmpiricalMeasure* m = &mu;
        auto average = [dim, m, alpha](std::span<const double> x, std::span<double> out, auto&& field) {
          std::fill(out.begin(), out.end(), 0.0);
          Vector shifted(dim);
          const std::size_t n = m->size();
          for (std::size_t i = 0; i < n; ++i) {
            const auto z = m->point(i);
            for (std::size_t k = 0; k < dim; ++k) shifted[k] = x[k] - alpha * z[k];
            field(shifted, out);
          }
          for (double& v : out) v /= static_cast<double>(n);
        };
        return FrozenCoefficients(
            dim,
            [b, average](std::span<const double> x, std::span<double> out) {
              average(x, out, [&b](const Vector& u, std::span<double> acc) {
                const Vector v = (*b)(u);
                for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += v[k];
              });
            },
            [s, average](std::span<const double> x, std::span<double> out) {
              average(x, out, [&s](const Vector& u, std::span<double> acc) {
                const Matrix v = (*s)(u);
                for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += v.data[k];
              });
            });
      },
      "landau_convolution");
}

}  // namespace mvsde
