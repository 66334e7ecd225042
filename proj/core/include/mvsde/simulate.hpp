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
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "mvsde/measure.hpp"
#include "mvsde/model.hpp"

namespace mvsde {

struct SimConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  std::size_t n_particles = 1000;
  std::uint64_t seed = 0;
  Taming taming = Taming::none;
  /// Steps between moment snapshots.
  std::size_t record_every = 10;
  std::vector<double> moment_orders{2.0};

  /// Number of Euler steps, round(t_end / dt).
  std::uint64_t num_steps() const;
  /// Throws InvalidArgument when a field is out of range.
  void validate() const;
};

/// N interacting particles; the simulated stand-in for the law of X_t.
///
/// The Gaussian increment of particle i at step k is a pure function of
/// (seed, i, k), so evolution does not depend on thread count and two
/// ensembles sharing a seed see identical noise.
struct ParticleEnsemble {
  EmpiricalMeasure cloud;
  double time = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t step_index = 0;

  ParticleEnsemble(EmpiricalMeasure init, std::uint64_t seed_, double t0 = 0.0)
      : cloud(std::move(init)), time(t0), seed(seed_) {}

  std::size_t size() const noexcept { return cloud.size(); }
  std::size_t dim() const noexcept { return cloud.dim(); }
  const EmpiricalMeasure& empirical() const noexcept { return cloud; }
};

/// E|X_t|^r estimates on the snapshot grid. values[k][j] is the k-th order at
/// times[j]; stderr is a delete-one-block jackknife over particle blocks.
struct MomentTrajectory {
  std::vector<double> times;
  std::vector<double> orders;
  std::vector<std::vector<double>> values;
  std::vector<std::vector<double>> standard_errors;

  /// Index of `order` in `orders`; throws InvalidArgument if absent.
  std::size_t order_index(double order) const;
  /// Header `t,m<r>...,stderr_m<r>...`, 17 significant digits.
  std::string to_csv() const;
};

/// Column label used for moment order r in CSV output ("m2", "m2.5").
std::string moment_label(double r);

/// Number of particle blocks used by the jackknife error bars.
inline constexpr std::size_t kJackknifeBlocks = 20;

/// Row of jackknife estimates for one snapshot: mean of |x|^r and its stderr.
std::pair<double, double> abs_moment_with_stderr(const EmpiricalMeasure& mu, double r);

/// One explicit Euler-Maruyama step of the particle system, in place:
///   X_i += b~(t, X_i, mu) dt + sigma(t, X_i, mu) sqrt(dt) xi_i
/// with mu the pre-step snapshot and b~ = b / (1 + dt |b|) when tamed.
/// Throws NonFiniteState naming the first offending particle.
void advance(ParticleEnsemble& ens, const CoefficientPair& coeffs, double dt, Taming taming);

/// Value-returning form of `advance`.
ParticleEnsemble step(const ParticleEnsemble& ens, const CoefficientPair& coeffs, double dt, Taming taming);

using Observer = std::function<void(const ParticleEnsemble&)>;

struct RunResult {
  ParticleEnsemble ensemble;
  MomentTrajectory moments;
};

/// Propagates `init` for cfg.num_steps() steps, recording moments every
/// cfg.record_every steps (and at the final step). `observer`, if set, sees
/// the ensemble at t = 0 and after every step.
RunResult run(const EmpiricalMeasure& init, const CoefficientPair& coeffs, const SimConfig& cfg,
              const Observer& observer = {});

/// D(t) = (1/N) sum_i |X_i(t) - Y_i(t)|^2 under synchronous coupling.
struct CoupledTrajectory {
  std::vector<double> times;
  std::vector<double> distance_sq;
  std::vector<double> standard_errors;
  /// W_2(marginal clouds)^2 at the same times; empty when d > 1 and N exceeds
  /// the exact assignment limit.
  std::vector<double> marginal_w2_sq;

  /// Header `t,D,stderr_D`, 17 significant digits.
  std::string to_csv() const;
};

struct CoupledResult {
  CoupledTrajectory trajectory;
  ParticleEnsemble x;
  ParticleEnsemble y;
};

/// Runs two ensembles with identical Gaussian increments per (particle, step).
CoupledResult run_coupled(const EmpiricalMeasure& init_x, const EmpiricalMeasure& init_y,
                          const CoefficientPair& coeffs, const SimConfig& cfg);

inline constexpr double kNeverExited = std::numeric_limits<double>::infinity();

/// Grid-resolved first time each particle reaches |x| >= radius. Feed it as
/// an Observer; no Brownian-bridge correction, bias O(sqrt(dt)).
class ExitTimeTracker {
 public:
  explicit ExitTimeTracker(double radius);

  void observe(const ParticleEnsemble& ens);
  void observe(double time, const EmpiricalMeasure& cloud);
  const std::vector<double>& exit_times() const noexcept { return exit_; }

 private:
  double radius_;
  std::vector<double> exit_;
};

struct Snapshot {
  double time;
  EmpiricalMeasure cloud;
};

/// Exit times over a stored path of snapshots (ordered by time).
std::vector<double> first_exit_time(const std::vector<Snapshot>& path, double radius);

/// For consecutive truncation levels n_k < n_{k+1}, runs truncate(coeffs, n)
/// in lockstep from the same seed and returns
///   sup_t (1/N) sum_i |X_i^{n_k}(t) - X_i^{n_{k+1}}(t)|
/// over every step of the grid. Result has levels.size() - 1 entries.
std::vector<double> truncation_convergence_probe(const CoefficientPair& coeffs, const EmpiricalMeasure& init,
                                                 const std::vector<double>& levels, const SimConfig& cfg);

}  // namespace mvsde
