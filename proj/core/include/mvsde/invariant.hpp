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
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mvsde/measure.hpp"
#include "mvsde/model.hpp"
#include "mvsde/simulate.hpp"
#include "mvsde/stats.hpp"

namespace mvsde {

struct CauchyRow {
  double t = 0.0;
  double s = 0.0;
  double w2 = 0.0;
  /// Bootstrap standard error over paired particle resampling.
  double stderr_value = 0.0;
};

inline constexpr std::size_t kDefaultBootstrapResamples = 200;

/// W_2 between the delta_0-started cloud at time t and at time t + s, from one
/// ensemble run to max(t) + max(s). Times are rounded to the step grid.
std::vector<CauchyRow> cauchy_probe(const CoefficientPair& coeffs, const SimConfig& cfg,
                                    const std::vector<double>& t_grid, const std::vector<double>& s_grid,
                                    std::size_t bootstrap = kDefaultBootstrapResamples);

/// Bootstrap standard error of W_2(a, b) resampling particle indices jointly.
double bootstrap_w2_stderr(const EmpiricalMeasure& a, const EmpiricalMeasure& b, std::size_t resamples,
                           std::uint64_t seed);

/// `t,s,w2,stderr`, 17 significant digits.
std::string cauchy_table_csv(const std::vector<CauchyRow>& rows);

/// Largest of (w2 - A e^{-rate t}) / stderr over the rows, with A fitted at
/// the first row (A = w2_0 e^{rate t_0}). <= 4 means the envelope dominates.
double cauchy_envelope_excess(const std::vector<CauchyRow>& rows, double rate);

struct ContractionEstimate {
  /// Slope of log D(t) (index-coupled squared distance).
  double rate = 0.0;
  double r2 = 0.0;
  /// Slope of log W_2(marginals)^2, NaN when unavailable.
  double w2_rate = 0.0;
  CoupledTrajectory trajectory;
};

/// Throws EmptyDecay when D(t) is identically zero.
ContractionEstimate contraction_rate(const CoefficientPair& coeffs, const EmpiricalMeasure& init_x,
                                     const EmpiricalMeasure& init_y, const SimConfig& cfg);

struct StationarySummary {
  ShapeSummary shape;
  double expected_mean = 0.0;
  double expected_variance = 0.0;
  double expected_excess_kurtosis = 0.0;
  EmpiricalMeasure terminal;
};

/// Runs the mean-field OU model from delta_0 (all particles at 0) and compares
/// the terminal cloud with the Gaussian invariant law N(0, 1/(2 alpha)).
StationarySummary stationary_ou(double alpha, const SimConfig& cfg);

struct SelfConsistency {
  /// Fixed point of the stationary mean ODE dm/dt = -(alpha + 1) m.
  double m_star = 0.0;
  /// Solution set of the displayed relation m = m / alpha.
  std::string displayed_relation_solutions;
};

SelfConsistency solve_self_consistency(double alpha);

struct ErgodicityReport {
  std::vector<CauchyRow> cauchy_table;
  std::optional<double> contraction_rate;
  std::optional<double> contraction_r2;
  std::optional<StationarySummary> stationary;
  SelfConsistency self_consistency;

  std::string to_json() const;
};

}  // namespace mvsde
