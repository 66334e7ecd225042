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
#include <vector>

#include "mvsde/linalg.hpp"
#include "mvsde/measure.hpp"
#include "mvsde/model.hpp"
#include "mvsde/sampling.hpp"

namespace mvsde {

enum class Assumption { A1, A2, A3, A4, B1, B2, B3, H };

std::string to_string(Assumption a);
/// Throws InvalidArgument on an unknown name.
Assumption parse_assumption(const std::string& name);

/// How the falsifiers sample (t, x, y, mu, nu) tuples.
struct SampleDesign {
  /// Sample tuples per radius level.
  std::size_t n_points = 200;
  /// Increasing localisation radii N.
  std::vector<double> radius_grid{1.0, 2.0, 4.0, 8.0};
  CloudFamily cloud_family;
  std::uint64_t seed = 0;
  /// Moment order r of W_r and ||mu||_r.
  double r = 2.0;
  std::vector<double> time_grid{0.0, 1.0, 10.0};

  void validate() const;
};

/// The tuple achieving the reported extreme. `value` is the checked quantity
/// for that tuple and replays bit-exactly through replay_witness.
struct MarginWitness {
  double t = 0.0;
  Vector x;
  Vector y;
  std::optional<EmpiricalMeasure> mu;
  std::optional<EmpiricalMeasure> nu;
  double radius = 0.0;
  /// Extra constant the quantity depends on (C_N for A4/B3), else 0.
  double scale = 0.0;
  double value = 0.0;
};

struct MarginReport {
  Assumption assumption = Assumption::A1;
  /// Smallest constant consistent with the sample (C_N, K, decay K, C_1).
  double best_constant = 0.0;
  bool violated = false;
  MarginWitness witness;
  /// Tuples dropped for a near-zero denominator.
  std::size_t skipped = 0;
  /// Constant restricted to each radius level, where the check is radius-wise.
  std::vector<double> per_radius;
  /// Largest ratio per coupling kind for H: index, optimal, random.
  std::vector<double> coupling_ratios;

  /// {assumption, best_constant, violated, witness:{t,x,y,mu_file,nu_file}, skipped}
  std::string to_json(const std::string& mu_file, const std::string& nu_file) const;
};

/// (A1) with `restrict_support` (clouds clamped into [-N, N]^d), else (B1).
/// Ratio (|b(t,x,mu) - b(t,y,nu)| + ||sigma(t,x,mu) - sigma(t,y,nu)||_HS) / (|x - y| + W_r(mu, nu)),
/// skipped when the denominator is below 1e-12.
MarginReport check_local_lipschitz(const CoefficientPair& coeffs, const SampleDesign& design,
                                   bool restrict_support = true);

enum class GrowthForm { A2, B2 };

/// (A2): (2<b, x> + ||sigma||^2) / (1 + |x|^2 + ||mu||_r^2).
/// (B2): max of 2<b, x> / (1 + |x|^2 + ||mu||_r) and ||sigma||^2 / (1 + |x|^2 + ||mu||_r^2).
/// Violated when the per-radius constant grows along the radius grid with a
/// log-log slope above 0.5.
MarginReport check_growth(const CoefficientPair& coeffs, const SampleDesign& design, GrowthForm form = GrowthForm::A2);

/// Number of halvings in the measure sequences mu + 2^-n z of the continuity check.
inline constexpr int kContinuityLevels = 30;

/// (A3): sup over an x grid in the N-ball and the time grid of the coefficient
/// discrepancy between mu^n = mu + 2^-n z and mu. Passes per sample when the
/// last discrepancy is at most 1e-6 times the first.
MarginReport check_continuity_in_measure(const CoefficientPair& coeffs, const SampleDesign& design);

/// (A4)/(B3): with C_N from check_local_lipschitz (A1 mode), the residual
///   (LHS - C_N |x - y| - C_N W_{r,N}(mu, nu)) / min(W_r(mu, nu), 1)
/// over unrestricted clouds. best_constant is the smallest decay K feasible at
/// `delta`; violated when it exceeds `decay_k`.
MarginReport check_local_with_decay(const CoefficientPair& coeffs, const SampleDesign& design, double decay_k,
                                    double delta, Assumption which = Assumption::A4);

/// (H): max over sampled couplings pi of
///   int (<b(x,mu) - b(y,nu), x - y> + ||sigma(x,mu) - sigma(y,nu)||_HS^2) dpi / int |x - y|^2 dpi.
/// Couplings: index pairing, W_2-optimal pairing, random permutation.
/// best_constant = -2 * max ratio (the largest admissible C_1); violated unless positive.
MarginReport check_strong_monotonicity(const CoefficientPair& coeffs, const SampleDesign& design);

/// Recomputes the witness quantity of `report` from the witness tuple alone.
double replay_witness(const CoefficientPair& coeffs, const MarginReport& report, double r);

}  // namespace mvsde
