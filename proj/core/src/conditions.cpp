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
#include "mvsde/conditions.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "json.hpp"
#include "mvsde/error.hpp"
#include "mvsde/rng.hpp"
#include "mvsde/stats.hpp"

namespace mvsde {
namespace {

constexpr double kSkipBelow = 1e-12;
constexpr double kDegenerateCoupling = 1e-24;
constexpr double kInf = std::numeric_limits<double>::infinity();

// |b_f(x) - b_g(y)| + ||sigma_f(x) - sigma_g(y)||_HS
double coefficient_gap(const FrozenCoefficients& f, std::span<const double> x, const FrozenCoefficients& g,
                       std::span<const double> y) {
  const Vector bf = f.drift(x);
  const Vector bg = g.drift(y);
  const Matrix sf = f.diffusion(x);
  const Matrix sg = g.diffusion(y);
  double db = 0.0;
  for (std::size_t i = 0; i < bf.size(); ++i) db += (bf[i] - bg[i]) * (bf[i] - bg[i]);
  double ds = 0.0;
  for (std::size_t i = 0; i < sf.data.size(); ++i) ds += (sf.data[i] - sg.data[i]) * (sf.data[i] - sg.data[i]);
  return std::sqrt(db) + std::sqrt(ds);
}

double lipschitz_ratio(const CoefficientPair& c, double t, std::span<const double> x, std::span<const double> y,
                       const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, double r) {
  const double den = distance(x, y) + wasserstein(mu, nu, r);
  if (den < kSkipBelow) return std::numeric_limits<double>::quiet_NaN();
  const auto f = c.bind(t, mu);
  const auto g = c.bind(t, nu);
  return coefficient_gap(f, x, g, y) / den;
}

double growth_ratio(const CoefficientPair& c, double t, std::span<const double> x, const EmpiricalMeasure& mu,
                    double r, GrowthForm form) {
  const auto f = c.bind(t, mu);
  const Vector b = f.drift(x);
  const Matrix s = f.diffusion(x);
  const double bx = 2.0 * dot(b, x);
  const double ss = squared_norm(s.data);
  const double xx = squared_norm(x);
  const double m = moment(mu, r);
  if (form == GrowthForm::A2) return (bx + ss) / (1.0 + xx + m * m);
  return std::max(bx / (1.0 + xx + m), ss / (1.0 + xx + m * m));
}

std::vector<Vector> ball_grid(std::size_t dim, double radius) {
  std::vector<Vector> grid;
  if (dim == 1) {
    constexpr int kHalf = 10;
    for (int k = -kHalf; k <= kHalf; ++k) grid.push_back({radius * k / kHalf});
    return grid;
  }
  grid.push_back(Vector(dim, 0.0));
  for (std::uint64_t k = 0; k < 32; ++k) grid.push_back(sample_in_ball(dim, radius, 0x5eedULL, k));
  return grid;
}

EmpiricalMeasure perturbed(const EmpiricalMeasure& mu, const EmpiricalMeasure& z, double eps) {
  std::vector<double> pts(mu.flat().begin(), mu.flat().end());
  const auto zf = z.flat();
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] += eps * zf[i];
  return EmpiricalMeasure(std::move(pts), mu.dim());
}

// D_last / D_first for mu^n = mu + 2^-n z; NaN when D is identically 0.
double continuity_ratio(const CoefficientPair& c, double t, const EmpiricalMeasure& mu, const EmpiricalMeasure& z,
                        double radius) {
  const auto grid = ball_grid(mu.dim(), radius);
  const auto base = c.bind(t, mu);
  auto discrepancy = [&](int n) {
    const EmpiricalMeasure mun = perturbed(mu, z, std::ldexp(1.0, -n));
    const auto fn = c.bind(t, mun);
    double sup = 0.0;
    for (const auto& x : grid) sup = std::max(sup, coefficient_gap(fn, x, base, x));
    return sup;
  };
  double first = 0.0;
  double last = 0.0;
  for (int n = 1; n <= kContinuityLevels; ++n) {
    const double dn = discrepancy(n);
    if (n == 1) first = dn;
    last = dn;
  }
  if (first == 0.0) return last == 0.0 ? std::numeric_limits<double>::quiet_NaN() : kInf;
  return last / first;
}

double decay_residual(const CoefficientPair& c, double t, std::span<const double> x, std::span<const double> y,
                      const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, double r, double radius, double cn) {
  const double w = std::min(wasserstein(mu, nu, r), 1.0);
  if (w < kSkipBelow) return std::numeric_limits<double>::quiet_NaN();
  const auto f = c.bind(t, mu);
  const auto g = c.bind(t, nu);
  const double lhs = coefficient_gap(f, x, g, y);
  return (lhs - cn * distance(x, y) - cn * wasserstein_local(mu, nu, r, radius)) / w;
}

// Index coupling of mu and nu.
double monotonicity_ratio(const CoefficientPair& c, double t, const EmpiricalMeasure& mu,
                          const EmpiricalMeasure& nu) {
  if (mu.size() != nu.size()) throw UnequalSupportSize("(H) couplings need equal-size clouds");
  const auto f = c.bind(t, mu);
  const auto g = c.bind(t, nu);
  const std::size_t d = mu.dim();
  double num = 0.0;
  double den = 0.0;
  Vector diff(d);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const auto x = mu.point(i);
    const auto y = nu.point(i);
    const Vector bf = f.drift(x);
    const Vector bg = g.drift(y);
    const Matrix sf = f.diffusion(x);
    const Matrix sg = g.diffusion(y);
    double inner = 0.0;
    for (std::size_t k = 0; k < d; ++k) inner += (bf[k] - bg[k]) * (x[k] - y[k]);
    double hs = 0.0;
    for (std::size_t k = 0; k < sf.data.size(); ++k) hs += (sf.data[k] - sg.data[k]) * (sf.data[k] - sg.data[k]);
    num += inner + hs;
    den += squared_norm(x) + squared_norm(y) - 2.0 * dot(x, y);
  }
  if (den / static_cast<double>(mu.size()) < kDegenerateCoupling) return std::numeric_limits<double>::quiet_NaN();
  return num / den;
}

EmpiricalMeasure clamp_box(const EmpiricalMeasure& mu, double n) {
  std::vector<double> pts(mu.flat().begin(), mu.flat().end());
  for (auto& p : pts) p = std::clamp(p, -n, n);
  return EmpiricalMeasure(std::move(pts), mu.dim());
}

EmpiricalMeasure reorder(const EmpiricalMeasure& nu, const std::vector<std::size_t>& pairing) {
  const std::size_t d = nu.dim();
  std::vector<double> pts(nu.size() * d);
  for (std::size_t i = 0; i < pairing.size(); ++i) {
    const auto y = nu.point(pairing[i]);
    std::copy(y.begin(), y.end(), pts.begin() + static_cast<std::ptrdiff_t>(i * d));
  }
  return EmpiricalMeasure(std::move(pts), d);
}

// Growth along the radius grid: every level positive and log-log slope > 0.5.
bool grows_with_radius(const std::vector<double>& radii, const std::vector<double>& k) {
  if (radii.size() < 2) return false;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(k[i] > 0.0)) return false;
    if (!std::isfinite(k[i])) return true;
    lx.push_back(std::log(radii[i]));
    ly.push_back(std::log(k[i]));
  }
  return least_squares(lx, ly).slope > 0.5;
}

struct Tracker {
  MarginReport& rep;
  double best = -kInf;

  // Returns true when `v` becomes the new extreme.
  bool offer(double v) {
    if (std::isnan(v)) {
      ++rep.skipped;
      return false;
    }
    if (v > best) {
      best = v;
      return true;
    }
    return false;
  }
};

std::uint64_t stream_seed(const SampleDesign& design, const char* label) { return split_seed(design.seed, label); }

}  // namespace

std::string to_string(Assumption a) {
  switch (a) {
    case Assumption::A1: return "A1";
    case Assumption::A2: return "A2";
    case Assumption::A3: return "A3";
    case Assumption::A4: return "A4";
    case Assumption::B1: return "B1";
    case Assumption::B2: return "B2";
    case Assumption::B3: return "B3";
    case Assumption::H: return "H";
  }
  return "?";
}

Assumption parse_assumption(const std::string& name) {
  std::string up = name;
  for (auto& ch : up) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  for (Assumption a : {Assumption::A1, Assumption::A2, Assumption::A3, Assumption::A4, Assumption::B1, Assumption::B2,
                       Assumption::B3, Assumption::H})
    if (to_string(a) == up) return a;
  throw InvalidArgument("unknown assumption '" + name + "'");
}

void SampleDesign::validate() const {
  if (n_points < 1) throw InvalidArgument("n_points must be at least 1");
  if (radius_grid.empty()) throw InvalidArgument("radius_grid is empty");
  for (std::size_t i = 0; i < radius_grid.size(); ++i) {
    if (!(radius_grid[i] > 0.0)) throw NonpositiveParameter("radii must be positive");
    if (i > 0 && !(radius_grid[i] > radius_grid[i - 1])) throw InvalidArgument("radii must be increasing");
  }
  if (time_grid.empty()) throw InvalidArgument("time_grid is empty");
  if (!(r >= 1.0)) throw InvalidArgument("moment order r must be >= 1");
  if (cloud_family.cloud_size < 1 || cloud_family.components < 1)
    throw InvalidArgument("cloud family counts must be at least 1");
}

std::string MarginReport::to_json(const std::string& mu_file, const std::string& nu_file) const {
  nlohmann::json j;
  j["assumption"] = mvsde::to_string(assumption);
  j["best_constant"] = best_constant;
  j["violated"] = violated;
  nlohmann::json w;
  w["t"] = witness.t;
  w["x"] = witness.x;
  w["y"] = witness.y;
  w["mu_file"] = mu_file.empty() ? nlohmann::json(nullptr) : nlohmann::json(mu_file);
  w["nu_file"] = nu_file.empty() ? nlohmann::json(nullptr) : nlohmann::json(nu_file);
  j["witness"] = w;
  j["skipped"] = skipped;
  return j.dump(2);
}

MarginReport check_local_lipschitz(const CoefficientPair& coeffs, const SampleDesign& design, bool restrict_support) {
  design.validate();
  const std::size_t d = coeffs.dim();
  const std::uint64_t seed = stream_seed(design, "conditions.lipschitz");
  MarginReport rep;
  rep.assumption = restrict_support ? Assumption::A1 : Assumption::B1;
  Tracker global{rep};
  std::uint64_t draw = 0;
  for (double radius : design.radius_grid) {
    double level = 0.0;
    for (std::size_t k = 0; k < design.n_points; ++k, ++draw) {
      const double t = design.time_grid[k % design.time_grid.size()];
      const Vector x = sample_in_ball(d, radius, seed, 2 * draw);
      Vector y = sample_in_ball(d, radius, seed, 2 * draw + 1);
      if (k % 2 == 1) {
        // Near pairs resolve the local slope.
        for (std::size_t i = 0; i < d; ++i) y[i] = x[i] + 1e-3 * y[i];
        phi_inplace(y, radius);
      }
      EmpiricalMeasure mu = sample_cloud(design.cloud_family, d, seed, 2 * draw);
      EmpiricalMeasure nu = sample_cloud(design.cloud_family, d, seed, 2 * draw + 1);
      if (restrict_support) {
        mu = clamp_box(mu, radius);
        nu = clamp_box(nu, radius);
      }
      const double v = lipschitz_ratio(coeffs, t, x, y, mu, nu, design.r);
      if (!std::isnan(v)) level = std::max(level, v);
      if (global.offer(v)) rep.witness = {t, x, y, mu, nu, radius, 0.0, v};
    }
    rep.per_radius.push_back(level);
  }
  rep.best_constant = std::max(global.best, 0.0);
  rep.violated = !std::isfinite(rep.best_constant) ||
                 (!restrict_support && grows_with_radius(design.radius_grid, rep.per_radius));
  return rep;
}

MarginReport check_growth(const CoefficientPair& coeffs, const SampleDesign& design, GrowthForm form) {
  design.validate();
  const std::size_t d = coeffs.dim();
  const std::uint64_t seed = stream_seed(design, "conditions.growth");
  MarginReport rep;
  rep.assumption = form == GrowthForm::A2 ? Assumption::A2 : Assumption::B2;
  Tracker global{rep};
  std::uint64_t draw = 0;
  for (double radius : design.radius_grid) {
    double level = -kInf;
    for (std::size_t k = 0; k < design.n_points; ++k, ++draw) {
      const double t = design.time_grid[k % design.time_grid.size()];
      const Vector x = sample_in_ball(d, radius, seed, draw);
      const EmpiricalMeasure mu = sample_cloud(design.cloud_family, d, seed, draw);
      const double v = growth_ratio(coeffs, t, x, mu, design.r, form);
      level = std::max(level, v);
      if (global.offer(v)) rep.witness = {t, x, {}, mu, std::nullopt, radius, 0.0, v};
    }
    rep.per_radius.push_back(level);
  }
  rep.best_constant = global.best;
  rep.violated = grows_with_radius(design.radius_grid, rep.per_radius);
  return rep;
}

MarginReport check_continuity_in_measure(const CoefficientPair& coeffs, const SampleDesign& design) {
  design.validate();
  const std::size_t d = coeffs.dim();
  const std::uint64_t seed = stream_seed(design, "conditions.continuity");
  CloudFamily normal_family = design.cloud_family;
  normal_family.components = 1;
  normal_family.mean_lo = normal_family.mean_hi = 0.0;
  normal_family.scale_lo = normal_family.scale_hi = 1.0;
  normal_family.stress_every = 0;
  MarginReport rep;
  rep.assumption = Assumption::A3;
  Tracker global{rep};
  std::uint64_t draw = 0;
  for (double radius : design.radius_grid) {
    double level = 0.0;
    for (std::size_t k = 0; k < design.n_points; ++k, ++draw) {
      const EmpiricalMeasure mu = sample_cloud(design.cloud_family, d, seed, draw);
      const EmpiricalMeasure z = sample_cloud(normal_family, d, split_seed(seed, "direction"), draw);
      for (double t : design.time_grid) {
        const double v = continuity_ratio(coeffs, t, mu, z, radius);
        if (!std::isnan(v)) level = std::max(level, v);
        if (global.offer(v)) rep.witness = {t, {}, {}, mu, z, radius, 0.0, v};
      }
    }
    rep.per_radius.push_back(level);
  }
  rep.best_constant = std::max(global.best, 0.0);
  rep.violated = rep.best_constant > 1e-6;
  return rep;
}

MarginReport check_local_with_decay(const CoefficientPair& coeffs, const SampleDesign& design, double decay_k,
                                    double delta, Assumption which) {
  if (!(decay_k > 0.0) || !(delta > 0.0)) throw NonpositiveParameter("decay K and delta must be positive");
  if (which != Assumption::A4 && which != Assumption::B3)
    throw InvalidArgument("check_local_with_decay checks A4 or B3");
  const MarginReport lip = check_local_lipschitz(coeffs, design, true);
  const std::size_t d = coeffs.dim();
  const std::uint64_t seed = stream_seed(design, "conditions.decay");
  MarginReport rep;
  rep.assumption = which;
  rep.skipped = 0;
  Tracker global{rep};
  std::uint64_t draw = 0;
  for (std::size_t ri = 0; ri < design.radius_grid.size(); ++ri) {
    const double radius = design.radius_grid[ri];
    const double cn = lip.per_radius[ri];
    const double damp = cn * std::exp(-delta * cn);
    double level = 0.0;
    for (std::size_t k = 0; k < design.n_points; ++k, ++draw) {
      const double t = design.time_grid[k % design.time_grid.size()];
      const Vector x = sample_in_ball(d, radius, seed, 2 * draw);
      const Vector y = sample_in_ball(d, radius, seed, 2 * draw + 1);
      const EmpiricalMeasure mu = sample_cloud(design.cloud_family, d, seed, 2 * draw);
      const EmpiricalMeasure nu = sample_cloud(design.cloud_family, d, seed, 2 * draw + 1);
      const double res = decay_residual(coeffs, t, x, y, mu, nu, design.r, radius, cn);
      double needed = std::numeric_limits<double>::quiet_NaN();
      if (!std::isnan(res)) needed = res <= 0.0 ? 0.0 : (damp > 0.0 ? res / damp : kInf);
      if (!std::isnan(needed)) level = std::max(level, needed);
      if (global.offer(needed)) rep.witness = {t, x, y, mu, nu, radius, cn, res};
    }
    rep.per_radius.push_back(level);
  }
  rep.best_constant = std::max(global.best, 0.0);
  rep.violated = rep.best_constant > decay_k;
  return rep;
}

MarginReport check_strong_monotonicity(const CoefficientPair& coeffs, const SampleDesign& design) {
  design.validate();
  const std::size_t d = coeffs.dim();
  const std::uint64_t seed = stream_seed(design, "conditions.monotonicity");
  MarginReport rep;
  rep.assumption = Assumption::H;
  rep.coupling_ratios.assign(3, -kInf);
  Tracker global{rep};
  for (std::size_t k = 0; k < design.n_points; ++k) {
    const double t = design.time_grid[k % design.time_grid.size()];
    const EmpiricalMeasure mu = sample_cloud(design.cloud_family, d, seed, 2 * k);
    const EmpiricalMeasure nu = sample_cloud(design.cloud_family, d, seed, 2 * k + 1);
    const EmpiricalMeasure candidates[3] = {
        nu, reorder(nu, optimal_coupling(mu, nu, 2.0).pairing),
        reorder(nu, random_permutation(nu.size(), seed, k))};
    for (std::size_t c = 0; c < 3; ++c) {
      const double v = monotonicity_ratio(coeffs, t, mu, candidates[c]);
      if (!std::isnan(v)) rep.coupling_ratios[c] = std::max(rep.coupling_ratios[c], v);
      if (global.offer(v)) rep.witness = {t, {}, {}, mu, candidates[c], 0.0, 0.0, v};
    }
  }
  rep.best_constant = -2.0 * global.best;
  rep.violated = !(rep.best_constant > 0.0);
  return rep;
}

double replay_witness(const CoefficientPair& coeffs, const MarginReport& report, double r) {
  const MarginWitness& w = report.witness;
  auto need = [](const std::optional<EmpiricalMeasure>& m) -> const EmpiricalMeasure& {
    if (!m) throw InvalidArgument("witness lacks a cloud needed for replay");
    return *m;
  };
  switch (report.assumption) {
    case Assumption::A1:
    case Assumption::B1:
      return lipschitz_ratio(coeffs, w.t, w.x, w.y, need(w.mu), need(w.nu), r);
    case Assumption::A2:
      return growth_ratio(coeffs, w.t, w.x, need(w.mu), r, GrowthForm::A2);
    case Assumption::B2:
      return growth_ratio(coeffs, w.t, w.x, need(w.mu), r, GrowthForm::B2);
    case Assumption::A3:
      return continuity_ratio(coeffs, w.t, need(w.mu), need(w.nu), w.radius);
    case Assumption::A4:
    case Assumption::B3:
      return decay_residual(coeffs, w.t, w.x, w.y, need(w.mu), need(w.nu), r, w.radius, w.scale);
    case Assumption::H:
      return monotonicity_ratio(coeffs, w.t, need(w.mu), need(w.nu));
  }
  throw InvalidArgument("unknown assumption");
}

}  // namespace mvsde
