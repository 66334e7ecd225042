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
#include "mvsde/invariant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "mvsde/error.hpp"
#include "mvsde/lyapunov.hpp"
#include "mvsde/measure_io.hpp"
#include "mvsde/rng.hpp"

namespace mvsde {
namespace {

std::vector<std::size_t> sort_order(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
  return idx;
}

// W_2^2 of the multiplicity-weighted 1-d clouds, walking both sort orders.
double weighted_w2_sq_1d(std::span<const double> a, std::span<const double> b, const std::vector<std::size_t>& oa,
                         const std::vector<std::size_t>& ob, const std::vector<std::uint32_t>& count) {
  std::size_t ia = 0, ib = 0;
  std::uint32_t left_a = 0, left_b = 0;
  double s = 0.0;
  std::size_t total = 0;
  while (true) {
    while (left_a == 0 && ia < oa.size()) left_a = count[oa[ia++]];
    while (left_b == 0 && ib < ob.size()) left_b = count[ob[ib++]];
    if (left_a == 0 || left_b == 0) break;
    const std::uint32_t take = std::min(left_a, left_b);
    const double d = a[oa[ia - 1]] - b[ob[ib - 1]];
    s += take * d * d;
    total += take;
    left_a -= take;
    left_b -= take;
  }
  return s / static_cast<double>(total);
}

std::uint64_t steps_for(double t, double dt) { return static_cast<std::uint64_t>(std::llround(t / dt)); }

void check_grid(const std::vector<double>& g, const char* what) {
  if (g.empty()) throw InvalidArgument(std::string(what) + " is empty");
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(g[i] >= 0.0)) throw InvalidArgument(std::string(what) + " must be non-negative");
    if (i > 0 && !(g[i] > g[i - 1])) throw InvalidArgument(std::string(what) + " must be increasing");
  }
}

}  // namespace

double bootstrap_w2_stderr(const EmpiricalMeasure& a, const EmpiricalMeasure& b, std::size_t resamples,
                           std::uint64_t seed) {
  if (a.size() != b.size()) throw UnequalSupportSize("bootstrap needs equal-size clouds");
  if (a.dim() != b.dim()) throw DimensionMismatch("bootstrap clouds differ in dimension");
  if (resamples < 2) return 0.0;
  const std::size_t n = a.size();
  StreamSampler rng(seed, 0);
  std::vector<double> w(resamples);
  if (a.dim() == 1) {
    const auto oa = sort_order(a.flat());
    const auto ob = sort_order(b.flat());
    std::vector<std::uint32_t> count(n);
    for (std::size_t k = 0; k < resamples; ++k) {
      std::fill(count.begin(), count.end(), 0u);
      for (std::size_t i = 0; i < n; ++i) ++count[rng.below(n)];
      w[k] = std::sqrt(weighted_w2_sq_1d(a.flat(), b.flat(), oa, ob, count));
    }
  } else {
    const std::size_t d = a.dim();
    std::vector<double> pa(n * d), pb(n * d);
    for (std::size_t k = 0; k < resamples; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = rng.below(n);
        std::copy_n(a.point(j).begin(), d, pa.begin() + static_cast<std::ptrdiff_t>(i * d));
        std::copy_n(b.point(j).begin(), d, pb.begin() + static_cast<std::ptrdiff_t>(i * d));
      }
      w[k] = wasserstein(EmpiricalMeasure(pa, d), EmpiricalMeasure(pb, d), 2.0);
    }
  }
  return sample_stddev(w);
}

std::vector<CauchyRow> cauchy_probe(const CoefficientPair& coeffs, const SimConfig& cfg,
                                    const std::vector<double>& t_grid, const std::vector<double>& s_grid,
                                    std::size_t bootstrap) {
  check_grid(t_grid, "t_grid");
  check_grid(s_grid, "s_grid");
  SimConfig run_cfg = cfg;
  run_cfg.t_end = t_grid.back() + s_grid.back();
  run_cfg.validate();

  std::map<std::uint64_t, std::optional<EmpiricalMeasure>> snapshots;
  for (double t : t_grid)
    for (double s : s_grid) {
      snapshots[steps_for(t, cfg.dt)];
      snapshots[steps_for(t + s, cfg.dt)];
    }

  ParticleEnsemble ens(EmpiricalMeasure::dirac_origin(cfg.n_particles, coeffs.dim()), cfg.seed);
  const std::uint64_t last = snapshots.rbegin()->first;
  for (std::uint64_t k = 0;; ++k) {
    if (auto it = snapshots.find(k); it != snapshots.end()) it->second = ens.cloud;
    if (k == last) break;
    advance(ens, coeffs, cfg.dt, cfg.taming);
    ens.time = static_cast<double>(k + 1) * cfg.dt;
  }

  const std::uint64_t boot_seed = split_seed(cfg.seed, "invariant.bootstrap");
  std::vector<CauchyRow> rows;
  for (double t : t_grid)
    for (double s : s_grid) {
      const auto& a = *snapshots.at(steps_for(t, cfg.dt));
      const auto& b = *snapshots.at(steps_for(t + s, cfg.dt));
      CauchyRow row;
      row.t = t;
      row.s = s;
      row.w2 = wasserstein(a, b, 2.0);
      row.stderr_value = bootstrap_w2_stderr(a, b, bootstrap, splitmix64(boot_seed + rows.size()));
      rows.push_back(row);
    }
  return rows;
}

std::string cauchy_table_csv(const std::vector<CauchyRow>& rows) {
  std::ostringstream os;
  os << "t,s,w2,stderr\n";
  for (const auto& r : rows)
    os << format_double(r.t) << ',' << format_double(r.s) << ',' << format_double(r.w2) << ','
       << format_double(r.stderr_value) << '\n';
  return os.str();
}

double cauchy_envelope_excess(const std::vector<CauchyRow>& rows, double rate) {
  if (rows.empty()) throw EmptyWindow("empty Cauchy table");
  const double amp = rows.front().w2 * std::exp(rate * rows.front().t);
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& r : rows) {
    const double diff = r.w2 - amp * std::exp(-rate * r.t);
    double z;
    if (r.stderr_value > 0.0)
      z = diff / r.stderr_value;
    else
      z = diff > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    worst = std::max(worst, z);
  }
  return worst;
}

ContractionEstimate contraction_rate(const CoefficientPair& coeffs, const EmpiricalMeasure& init_x,
                                     const EmpiricalMeasure& init_y, const SimConfig& cfg) {
  CoupledResult res = run_coupled(init_x, init_y, coeffs, cfg);
  const auto& traj = res.trajectory;
  if (std::all_of(traj.distance_sq.begin(), traj.distance_sq.end(), [](double v) { return v == 0.0; }))
    throw EmptyDecay("coupled distance is identically zero; the contraction rate is undefined");
  const auto window = default_window(traj.times);
  const DecayFit fit = fit_log_slope(traj.times, traj.distance_sq, window);
  ContractionEstimate est;
  est.rate = fit.gamma_hat;
  est.r2 = fit.r2;
  est.w2_rate = std::numeric_limits<double>::quiet_NaN();
  if (!traj.marginal_w2_sq.empty()) {
    try {
      est.w2_rate = fit_log_slope(traj.times, traj.marginal_w2_sq, window).gamma_hat;
    } catch (const NonpositiveMoment&) {
      // Marginals coincide somewhere in the window; leave the W_2 rate undefined.
    }
  }
  est.trajectory = std::move(res.trajectory);
  return est;
}

StationarySummary stationary_ou(double alpha, const SimConfig& cfg) {
  if (!(alpha > 0.0)) throw NonpositiveParameter("stationary OU requires alpha > 0");
  const auto coeffs = preset_mean_field_ou(alpha);
  RunResult res = run(EmpiricalMeasure::dirac_origin(cfg.n_particles, 1), coeffs, cfg);
  StationarySummary out{shape_summary(res.ensemble.cloud.flat(), kJackknifeBlocks), 0.0, 1.0 / (2.0 * alpha), 0.0,
                        std::move(res.ensemble.cloud)};
  return out;
}

SelfConsistency solve_self_consistency(double alpha) {
  if (!(alpha > 0.0)) throw NonpositiveParameter("self-consistency requires alpha > 0");
  return {0.0, alpha == 1.0 ? "every real m" : "m = 0"};
}

std::string ErgodicityReport::to_json() const {
  nlohmann::json j;
  j["cauchy_table"] = nlohmann::json::array();
  for (const auto& r : cauchy_table)
    j["cauchy_table"].push_back({{"t", r.t}, {"s", r.s}, {"w2", r.w2}, {"stderr", r.stderr_value}});
  j["contraction_rate"] = contraction_rate ? nlohmann::json(*contraction_rate) : nlohmann::json(nullptr);
  j["contraction_r2"] = contraction_r2 ? nlohmann::json(*contraction_r2) : nlohmann::json(nullptr);
  if (stationary) {
    const auto& s = *stationary;
    j["stationary_summary"] = {{"mean", s.shape.mean},
                               {"variance", s.shape.variance},
                               {"excess_kurtosis", s.shape.excess_kurtosis},
                               {"mean_stderr", s.shape.mean_stderr},
                               {"variance_stderr", s.shape.variance_stderr},
                               {"kurtosis_stderr", s.shape.kurtosis_stderr},
                               {"expected_mean", s.expected_mean},
                               {"expected_variance", s.expected_variance},
                               {"expected_excess_kurtosis", s.expected_excess_kurtosis}};
  } else {
    j["stationary_summary"] = nullptr;
  }
  j["m_star"] = self_consistency.m_star;
  j["displayed_relation_solutions"] = self_consistency.displayed_relation_solutions;
  return j.dump(2);
}

}  // namespace mvsde
