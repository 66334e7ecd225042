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
#include "mvsde/simulate.hpp"

#include <cmath>
#include <exception>
#include <sstream>

#include "mvsde/error.hpp"
#include "mvsde/measure_io.hpp"
#include "mvsde/rng.hpp"
#include "mvsde/stats.hpp"

namespace mvsde {
namespace {

std::string nonfinite_message(std::size_t particle, std::uint64_t step, double time) {
  std::ostringstream os;
  os << "non-finite state: particle " << particle << " at step " << step << " (t = " << format_double(time) << ")";
  return os.str();
}

void check_positive_dt(double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("time step dt must be positive and finite");
}

void record_moments(MomentTrajectory& traj, const EmpiricalMeasure& cloud, double t) {
  traj.times.push_back(t);
  for (std::size_t k = 0; k < traj.orders.size(); ++k) {
    const auto [m, se] = abs_moment_with_stderr(cloud, traj.orders[k]);
    traj.values[k].push_back(m);
    traj.standard_errors[k].push_back(se);
  }
}

MomentTrajectory empty_trajectory(const std::vector<double>& orders) {
  MomentTrajectory traj;
  traj.orders = orders;
  traj.values.resize(orders.size());
  traj.standard_errors.resize(orders.size());
  return traj;
}

void record_coupled(CoupledTrajectory& traj, const EmpiricalMeasure& x, const EmpiricalMeasure& y, double t,
                    bool with_w2) {
  const std::size_t n = x.size();
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double dist = distance(x.point(i), y.point(i));
    sq[i] = dist * dist;
  }
  const auto est = block_jackknife_mean(sq, kJackknifeBlocks);
  traj.times.push_back(t);
  traj.distance_sq.push_back(est.mean);
  traj.standard_errors.push_back(est.stderr_value);
  if (with_w2) {
    const double w = wasserstein(x, y, 2.0);
    traj.marginal_w2_sq.push_back(w * w);
  }
}

}  // namespace

NonFiniteState::NonFiniteState(std::size_t particle, std::uint64_t step, double time)
    : Error(nonfinite_message(particle, step, time)), particle_(particle), step_(step), time_(time) {}

std::uint64_t SimConfig::num_steps() const { return static_cast<std::uint64_t>(std::llround(t_end / dt)); }

void SimConfig::validate() const {
  check_positive_dt(dt);
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw InvalidArgument("t_end must be finite and >= 0");
  if (t_end > 0.0 && dt > t_end) throw InvalidArgument("dt must not exceed t_end");
  if (n_particles < 2) throw InvalidArgument("n_particles must be at least 2");
  if (record_every < 1) throw InvalidArgument("record_every must be at least 1");
  for (double r : moment_orders)
    if (!(r >= 1.0)) throw InvalidArgument("moment orders must be >= 1");
}

std::size_t MomentTrajectory::order_index(double order) const {
  for (std::size_t k = 0; k < orders.size(); ++k)
    if (orders[k] == order) return k;
  throw InvalidArgument("moment order " + format_double(order) + " was not recorded");
}

std::string moment_label(double r) {
  std::ostringstream os;
  os << 'm' << r;
  return os.str();
}

std::string MomentTrajectory::to_csv() const {
  std::ostringstream os;
  os << 't';
  for (double r : orders) os << ',' << moment_label(r);
  for (double r : orders) os << ",stderr_" << moment_label(r);
  os << '\n';
  for (std::size_t j = 0; j < times.size(); ++j) {
    os << format_double(times[j]);
    for (const auto& col : values) os << ',' << format_double(col[j]);
    for (const auto& col : standard_errors) os << ',' << format_double(col[j]);
    os << '\n';
  }
  return os.str();
}

std::string CoupledTrajectory::to_csv() const {
  std::ostringstream os;
  os << "t,D,stderr_D\n";
  for (std::size_t j = 0; j < times.size(); ++j)
    os << format_double(times[j]) << ',' << format_double(distance_sq[j]) << ',' << format_double(standard_errors[j])
       << '\n';
  return os.str();
}

std::pair<double, double> abs_moment_with_stderr(const EmpiricalMeasure& mu, double r) {
  const std::size_t n = mu.size();
  std::vector<double> v(n);
  if (mu.dim() == 1) {
    const auto f = mu.flat();
    if (r == 2.0) {
      for (std::size_t i = 0; i < n; ++i) v[i] = f[i] * f[i];
    } else if (r == 4.0) {
      for (std::size_t i = 0; i < n; ++i) {
        const double s = f[i] * f[i];
        v[i] = s * s;
      }
    } else {
      for (std::size_t i = 0; i < n; ++i) v[i] = std::pow(std::abs(f[i]), r);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) v[i] = std::pow(norm(mu.point(i)), r);
  }
  const auto est = block_jackknife_mean(v, kJackknifeBlocks);
  return {est.mean, est.stderr_value};
}

void advance(ParticleEnsemble& ens, const CoefficientPair& coeffs, double dt, Taming taming) {
  check_positive_dt(dt);
  if (coeffs.dim() != ens.dim())
    throw DimensionMismatch("coefficients act on R^" + std::to_string(coeffs.dim()) + ", particles live in R^" +
                            std::to_string(ens.dim()));
  const std::size_t n = ens.size();
  const std::size_t d = ens.dim();
  // Every particle sees this one snapshot of the pre-step measure.
  const FrozenCoefficients frozen = coeffs.bind(ens.time, ens.cloud);
  const CounterRng rng(split_seed(ens.seed, "simulate.noise"));
  const std::uint64_t step_index = ens.step_index;
  const double sqrt_dt = std::sqrt(dt);
  const auto src = ens.cloud.flat();
  std::vector<double> next(n * d);
  std::exception_ptr failure;
  const bool tamed = taming == Taming::tamed;

#pragma omp parallel
  {
    std::vector<double> buf(d + d * d + d);
    const std::span<double> b(buf.data(), d);
    const std::span<double> sigma(buf.data() + d, d * d);
    const std::span<double> xi(buf.data() + d + d * d, d);
#pragma omp for schedule(static)
    for (std::size_t i = 0; i < n; ++i) {
      try {
        const auto x = src.subspan(i * d, d);
        frozen.drift(x, b);
        frozen.diffusion(x, sigma);
        double scale = dt;
        if (tamed) scale = dt / (1.0 + dt * norm(b));
        rng.normals(static_cast<std::uint32_t>(i), step_index, xi);
        for (std::size_t k = 0; k < d; ++k) {
          double noise = 0.0;
          for (std::size_t j = 0; j < d; ++j) noise += sigma[k * d + j] * xi[j];
          next[i * d + k] = x[k] + b[k] * scale + sqrt_dt * noise;
        }
      } catch (...) {
#pragma omp critical(mvsde_advance_failure)
        if (!failure) failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < d; ++k)
      if (!std::isfinite(next[i * d + k])) throw NonFiniteState(i, step_index + 1, ens.time + dt);

  ens.cloud = EmpiricalMeasure(std::move(next), d);
  ens.time += dt;
  ++ens.step_index;
}

ParticleEnsemble step(const ParticleEnsemble& ens, const CoefficientPair& coeffs, double dt, Taming taming) {
  ParticleEnsemble out = ens;
  advance(out, coeffs, dt, taming);
  return out;
}

RunResult run(const EmpiricalMeasure& init, const CoefficientPair& coeffs, const SimConfig& cfg,
              const Observer& observer) {
  cfg.validate();
  if (init.size() != cfg.n_particles)
    throw InvalidArgument("initial cloud has " + std::to_string(init.size()) + " points, config asks for " +
                          std::to_string(cfg.n_particles));
  ParticleEnsemble ens(init, cfg.seed);
  MomentTrajectory traj = empty_trajectory(cfg.moment_orders);
  if (observer) observer(ens);
  record_moments(traj, ens.cloud, 0.0);
  const std::uint64_t steps = cfg.num_steps();
  for (std::uint64_t k = 1; k <= steps; ++k) {
    advance(ens, coeffs, cfg.dt, cfg.taming);
    ens.time = static_cast<double>(k) * cfg.dt;
    if (observer) observer(ens);
    if (k % cfg.record_every == 0 || k == steps) record_moments(traj, ens.cloud, ens.time);
  }
  return {std::move(ens), std::move(traj)};
}

CoupledResult run_coupled(const EmpiricalMeasure& init_x, const EmpiricalMeasure& init_y,
                          const CoefficientPair& coeffs, const SimConfig& cfg) {
  cfg.validate();
  if (init_x.dim() != init_y.dim()) throw DimensionMismatch("coupled clouds differ in dimension");
  if (init_x.size() != init_y.size()) throw UnequalSupportSize("coupled clouds differ in size");
  if (init_x.size() != cfg.n_particles) throw InvalidArgument("initial clouds do not match n_particles");
  ParticleEnsemble x(init_x, cfg.seed);
  ParticleEnsemble y(init_y, cfg.seed);
  const bool with_w2 = init_x.dim() == 1 || init_x.size() <= kDefaultAssignmentLimit;
  CoupledTrajectory traj;
  record_coupled(traj, x.cloud, y.cloud, 0.0, with_w2);
  const std::uint64_t steps = cfg.num_steps();
  for (std::uint64_t k = 1; k <= steps; ++k) {
    advance(x, coeffs, cfg.dt, cfg.taming);
    advance(y, coeffs, cfg.dt, cfg.taming);
    x.time = y.time = static_cast<double>(k) * cfg.dt;
    if (k % cfg.record_every == 0 || k == steps) record_coupled(traj, x.cloud, y.cloud, x.time, with_w2);
  }
  return {std::move(traj), std::move(x), std::move(y)};
}

ExitTimeTracker::ExitTimeTracker(double radius) : radius_(radius) {
  if (!(radius > 0.0)) throw InvalidArgument("exit radius must be positive");
}

void ExitTimeTracker::observe(const ParticleEnsemble& ens) { observe(ens.time, ens.cloud); }

void ExitTimeTracker::observe(double time, const EmpiricalMeasure& cloud) {
  if (exit_.empty()) exit_.assign(cloud.size(), kNeverExited);
  if (exit_.size() != cloud.size()) throw InvalidArgument("exit tracker fed clouds of different sizes");
  for (std::size_t i = 0; i < exit_.size(); ++i)
    if (exit_[i] == kNeverExited && norm(cloud.point(i)) >= radius_) exit_[i] = time;
}

std::vector<double> first_exit_time(const std::vector<Snapshot>& path, double radius) {
  ExitTimeTracker tracker(radius);
  for (const auto& snap : path) tracker.observe(snap.time, snap.cloud);
  return tracker.exit_times();
}

std::vector<double> truncation_convergence_probe(const CoefficientPair& coeffs, const EmpiricalMeasure& init,
                                                 const std::vector<double>& levels, const SimConfig& cfg) {
  cfg.validate();
  if (levels.size() < 2) throw InvalidArgument("truncation probe needs at least two levels");
  for (std::size_t k = 1; k < levels.size(); ++k)
    if (!(levels[k] > levels[k - 1])) throw InvalidArgument("truncation levels must be increasing");
  if (init.size() != cfg.n_particles) throw InvalidArgument("initial cloud does not match n_particles");

  std::vector<CoefficientPair> truncated;
  std::vector<ParticleEnsemble> ensembles;
  for (double n : levels) {
    truncated.push_back(truncate(coeffs, n));
    ensembles.emplace_back(init, cfg.seed);
  }
  std::vector<double> sup(levels.size() - 1, 0.0);
  const std::size_t np = init.size();
  auto update = [&] {
    for (std::size_t k = 0; k + 1 < ensembles.size(); ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < np; ++i)
        s += distance(ensembles[k].cloud.point(i), ensembles[k + 1].cloud.point(i));
      sup[k] = std::max(sup[k], s / static_cast<double>(np));
    }
  };
  update();
  const std::uint64_t steps = cfg.num_steps();
  for (std::uint64_t step_no = 1; step_no <= steps; ++step_no) {
    for (std::size_t k = 0; k < ensembles.size(); ++k) {
      advance(ensembles[k], truncated[k], cfg.dt, cfg.taming);
      ensembles[k].time = static_cast<double>(step_no) * cfg.dt;
    }
    update();
  }
  return sup;
}

}  // namespace mvsde
