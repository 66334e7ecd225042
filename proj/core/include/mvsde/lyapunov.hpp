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
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mvsde/linalg.hpp"
#include "mvsde/measure.hpp"
#include "mvsde/model.hpp"
#include "mvsde/simulate.hpp"

namespace mvsde {

/// A Lyapunov function V(t, x, mu) with its analytic derivatives, evaluated at
/// a fixed (t, mu). `dmu(x, y)` is the L-derivative d_mu V(t, x, mu)(y) and
/// `dy_dmu(x, y)` its gradient in y.
struct BoundBundle {
  std::function<double(std::span<const double> x)> value;
  std::function<double(std::span<const double> x)> dt;
  std::function<Vector(std::span<const double> x)> grad_x;
  std::function<Matrix(std::span<const double> x)> hess_x;
  std::function<Vector(std::span<const double> x, std::span<const double> y)> dmu;
  std::function<Matrix(std::span<const double> x, std::span<const double> y)> dy_dmu;
};

class LyapunovBundle {
 public:
  using Binder = std::function<BoundBundle(double t, const EmpiricalMeasure& mu)>;

  /// `measure_independent` promises dmu == 0 and dy_dmu == 0; the generator
  /// then skips the O(N) measure term.
  LyapunovBundle(std::string name, std::size_t dim, Binder binder, bool measure_independent = false);

  const std::string& name() const noexcept { return name_; }
  std::size_t dim() const noexcept { return dim_; }
  bool measure_independent() const noexcept { return measure_independent_; }

  BoundBundle bind(double t, const EmpiricalMeasure& mu) const { return binder_(t, mu); }

  double value(double t, std::span<const double> x, const EmpiricalMeasure& mu) const;

 private:
  std::string name_;
  std::size_t dim_;
  Binder binder_;
  bool measure_independent_;
};

/// a * V1 + b * V2, derivatives combined linearly.
LyapunovBundle combine(double a, const LyapunovBundle& v1, double b, const LyapunovBundle& v2);

/// V(x, mu) = (int (x^2 + alpha y^2) mu(dy))^2 on R, for the linear Landau model.
LyapunovBundle example2_bundle(double alpha);
/// V(mu) = int |y|^4 mu(dy) on R^dim.
LyapunovBundle cubic_v4_bundle(std::size_t dim = 1);
/// V(x) = |x|^r on R^dim, r >= 2.
LyapunovBundle abs_pow_bundle(double r, std::size_t dim = 1);

/// Names accepted by make_builtin_bundle: example2_V, cubic_V4, abs_pow_r.
std::vector<std::string> builtin_bundle_names();
/// Throws UnknownBundle.
LyapunovBundle make_builtin_bundle(const std::string& name, double alpha, double r, std::size_t dim);

/// (L^mu V)(t, x, mu): state part plus the mu(dy) term as an average over the
/// cloud's own particles.
double generator(const LyapunovBundle& bundle, const CoefficientPair& coeffs, double t, std::span<const double> x,
                 const EmpiricalMeasure& mu);

/// (1/N) sum_i (L^mu V)(t, x_i, mu).
double integrated_generator(const LyapunovBundle& bundle, const CoefficientPair& coeffs, double t,
                            const EmpiricalMeasure& mu);

/// (1/N) sum_i V(t, x_i, mu).
double integrated_value(const LyapunovBundle& bundle, double t, const EmpiricalMeasure& mu);

/// Closed form of integrated_generator for example2_bundle(alpha) under
/// preset_landau_linear(alpha), in the raw moments a_k of mu.
double example2_integrated_generator_closed_form(const EmpiricalMeasure& mu, double alpha);

struct Witness {
  std::string kind;
  std::size_t cloud_index = 0;
  Vector x;
  double value = 0.0;
};

struct DriftInequalityReport {
  /// max over clouds of integrated_generator + gamma * integrated_value;
  /// <= 0 means the integrated drift inequality held on the sample.
  double max_margin = 0.0;
  std::size_t worst_cloud = 0;
  /// Smallest C_3 with |L V + gamma V|(t, x, mu) <= C_3 (|x|^r + ||mu||_r^r)
  /// over every sampled (x in cloud, mu).
  double growth_c3 = 0.0;
  Witness c3_witness;
};

DriftInequalityReport check_drift_inequality(const LyapunovBundle& bundle, const CoefficientPair& coeffs,
                                             const std::vector<EmpiricalMeasure>& clouds, double gamma, double t,
                                             double r);

struct SandwichReport {
  /// max over sampled (x, mu) of the larger of C1|x|^r - V and
  /// V - C2|x|^r - C2p ||mu||_r^r; <= 0 means no violation.
  double max_violation = 0.0;
  bool violated = false;
  Witness witness;
};

/// x ranges over each cloud's own points, mu over the clouds.
SandwichReport sandwich_check(const LyapunovBundle& bundle, const std::vector<EmpiricalMeasure>& clouds, double r,
                              double c1, double c2, double c2p, double t = 0.0);

struct DecayFit {
  double gamma_hat = 0.0;
  double r2 = 0.0;
};

/// Least-squares slope of log((values - floor)) against t over [lo, hi].
/// Throws EmptyWindow (< 5 points) or NonpositiveMoment.
DecayFit fit_log_slope(std::span<const double> times, std::span<const double> values, std::pair<double, double> window,
                       double floor = 0.0);

/// Moment Lyapunov exponent estimate from a trajectory, using the
/// (1/N) sum |X|^order column.
DecayFit fit_decay_rate(const MomentTrajectory& traj, double order, std::pair<double, double> window,
                        double floor = 0.0);

/// Default window: skip the first 10% of the trajectory's time span.
std::pair<double, double> default_window(std::span<const double> times);

/// Largest value over the grid of m(t) / [(C2 + C2p)/C1 m(0) e^{-gamma t} (1 + 5 se(t)/m(t))],
/// where m is the order-r column. <= 1 means the decay bound held.
double decay_bound_ratio(const MomentTrajectory& traj, double r, double c1, double c2, double c2p, double gamma);

struct StabilityReport {
  double gamma_hat = 0.0;
  double gamma_claimed = 0.0;
  double r = 0.0;
  std::pair<double, double> window{0.0, 0.0};
  double margin_sandwich = 0.0;
  double margin_drift = 0.0;
  double growth_c3 = 0.0;
  std::vector<Witness> witnesses;

  /// {gamma_hat, gamma_claimed, r, window:[lo,hi], margins:{sandwich, drift,
  /// growth_c3}, witnesses:[...]}
  std::string to_json() const;
};

/// Finite-difference consistency of one derivative of a bundle.
struct DerivativeCheck {
  std::string name;
  std::vector<double> steps;
  /// Max absolute error over the sample points, per step.
  std::vector<double> errors;
  double expected_order = 0.0;
  double observed_order = 0.0;
  bool passed = false;
};

struct BundleSample {
  double t;
  Vector x;
  EmpiricalMeasure mu;
};

/// Central differences for dt, grad_x, hess_x (O(h^2)) and dy_dmu (O(h^2)),
/// and the one-sided empirical probe (V(mu with y_j moved by h e) - V(mu)) N / h
/// for dmu (O(h)). Steps are h0, h0/2, h0/4.
std::vector<DerivativeCheck> validate_bundle(const LyapunovBundle& bundle, const std::vector<BundleSample>& samples,
                                             double h0 = 1e-2);

}  // namespace mvsde
