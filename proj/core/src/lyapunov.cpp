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
#include "mvsde/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "json.hpp"

#include "mvsde/error.hpp"
#include "mvsde/stats.hpp"

namespace mvsde {
namespace {

// Drift and diffusion matrix a = sigma sigma^T evaluated once at every particle
// of mu, reused by the measure term for every x.
struct ParticleCoefficients {
  std::size_t d = 0;
  std::vector<double> b;
  std::vector<double> a;
};

ParticleCoefficients evaluate_at_particles(const FrozenCoefficients& c, const EmpiricalMeasure& mu) {
  const std::size_t d = mu.dim();
  const std::size_t n = mu.size();
  ParticleCoefficients pc{d, std::vector<double>(n * d), std::vector<double>(n * d * d)};
  std::vector<double> sigma(d * d);
  for (std::size_t j = 0; j < n; ++j) {
    c.drift(mu.point(j), std::span<double>(pc.b.data() + j * d, d));
    c.diffusion(mu.point(j), sigma);
    const Matrix a = outer_self(sigma, d);
    std::copy(a.data.begin(), a.data.end(), pc.a.begin() + static_cast<std::ptrdiff_t>(j * d * d));
  }
  return pc;
}

class BoundGenerator {
 public:
  BoundGenerator(const LyapunovBundle& bundle, const CoefficientPair& coeffs, double t, const EmpiricalMeasure& mu)
      : mu_(mu),
        v_(bundle.bind(t, mu)),
        c_(coeffs.bind(t, mu)),
        d_(mu.dim()),
        measure_independent_(bundle.measure_independent()) {
    if (bundle.dim() != mu.dim() || coeffs.dim() != mu.dim())
      throw DimensionMismatch("bundle, coefficients and measure must share a dimension");
    if (!measure_independent_) particles_ = evaluate_at_particles(c_, mu);
  }

  double value(std::span<const double> x) const { return v_.value(x); }

  double operator()(std::span<const double> x) const {
    const Vector b = c_.drift(x);
    const Matrix sigma = c_.diffusion(x);
    const Matrix a = outer_self(sigma.data, d_);
    double out = v_.dt(x) + dot(b, v_.grad_x(x)) + 0.5 * trace_product(a.data, v_.hess_x(x).data, d_);
    if (measure_independent_) return out;
    const std::size_t n = mu_.size();
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const auto y = mu_.point(j);
      const std::span<const double> bj(particles_.b.data() + j * d_, d_);
      const std::span<const double> aj(particles_.a.data() + j * d_ * d_, d_ * d_);
      s += dot(bj, v_.dmu(x, y)) + 0.5 * trace_product(aj, v_.dy_dmu(x, y).data, d_);
    }
    return out + s / static_cast<double>(n);
  }

 private:
  const EmpiricalMeasure& mu_;
  BoundBundle v_;
  FrozenCoefficients c_;
  std::size_t d_;
  bool measure_independent_;
  ParticleCoefficients particles_;
};

Vector zero_vector(std::size_t d) { return Vector(d, 0.0); }
Matrix zero_matrix(std::size_t d) { return Matrix(d, d); }

double raw_moment_1d(const EmpiricalMeasure& mu, int k) {
  double s = 0.0;
  for (double v : mu.flat()) s += std::pow(v, k);
  return s / static_cast<double>(mu.size());
}

nlohmann::json witness_json(const Witness& w) {
  return {{"kind", w.kind}, {"cloud_index", w.cloud_index}, {"x", w.x}, {"value", w.value}};
}

Vector to_vector(std::span<const double> x) { return Vector(x.begin(), x.end()); }

}  // namespace

LyapunovBundle::LyapunovBundle(std::string name, std::size_t dim, Binder binder, bool measure_independent)
    : name_(std::move(name)), dim_(dim), binder_(std::move(binder)), measure_independent_(measure_independent) {
  if (dim_ == 0) throw InvalidArgument("bundle dimension must be positive");
  if (!binder_) throw InvalidArgument("bundle binder is empty");
}

double LyapunovBundle::value(double t, std::span<const double> x, const EmpiricalMeasure& mu) const {
  return bind(t, mu).value(x);
}

LyapunovBundle combine(double a, const LyapunovBundle& v1, double b, const LyapunovBundle& v2) {
  if (v1.dim() != v2.dim()) throw DimensionMismatch("combined bundles differ in dimension");
  const std::size_t d = v1.dim();
  auto binder = [a, b, v1, v2, d](double t, const EmpiricalMeasure& mu) {
    auto p = std::make_shared<const BoundBundle>(v1.bind(t, mu));
    auto q = std::make_shared<const BoundBundle>(v2.bind(t, mu));
    auto vec = [a, b, d](const Vector& u, const Vector& v) {
      Vector out(d);
      for (std::size_t i = 0; i < d; ++i) out[i] = a * u[i] + b * v[i];
      return out;
    };
    auto mat = [a, b](const Matrix& u, const Matrix& v) {
      Matrix out(u.rows, u.cols);
      for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] = a * u.data[i] + b * v.data[i];
      return out;
    };
    BoundBundle out;
    out.value = [a, b, p, q](std::span<const double> x) { return a * p->value(x) + b * q->value(x); };
    out.dt = [a, b, p, q](std::span<const double> x) { return a * p->dt(x) + b * q->dt(x); };
    out.grad_x = [vec, p, q](std::span<const double> x) { return vec(p->grad_x(x), q->grad_x(x)); };
    out.hess_x = [mat, p, q](std::span<const double> x) { return mat(p->hess_x(x), q->hess_x(x)); };
    out.dmu = [vec, p, q](std::span<const double> x, std::span<const double> y) {
      return vec(p->dmu(x, y), q->dmu(x, y));
    };
    out.dy_dmu = [mat, p, q](std::span<const double> x, std::span<const double> y) {
      return mat(p->dy_dmu(x, y), q->dy_dmu(x, y));
    };
    return out;
  };
  return LyapunovBundle(v1.name() + "+" + v2.name(), d, std::move(binder),
                        v1.measure_independent() && v2.measure_independent());
}

LyapunovBundle example2_bundle(double alpha) {
  if (!std::isfinite(alpha)) throw InvalidArgument("alpha must be finite");
  return LyapunovBundle("example2_V", 1, [alpha](double, const EmpiricalMeasure& mu) {
    if (mu.dim() != 1) throw DimensionMismatch("example2_V lives on R");
    const double shift = alpha * raw_moment_1d(mu, 2);
    BoundBundle v;
    v.value = [shift](std::span<const double> x) {
      const double s = x[0] * x[0] + shift;
      return s * s;
    };
    v.dt = [](std::span<const double>) { return 0.0; };
    v.grad_x = [shift](std::span<const double> x) { return Vector{4.0 * x[0] * (x[0] * x[0] + shift)}; };
    v.hess_x = [shift](std::span<const double> x) {
      Matrix h(1, 1);
      h(0, 0) = 4.0 * (x[0] * x[0] + shift) + 8.0 * x[0] * x[0];
      return h;
    };
    v.dmu = [shift, alpha](std::span<const double> x, std::span<const double> y) {
      return Vector{4.0 * alpha * y[0] * (x[0] * x[0] + shift)};
    };
    v.dy_dmu = [shift, alpha](std::span<const double> x, std::span<const double>) {
      Matrix h(1, 1);
      h(0, 0) = 4.0 * alpha * (x[0] * x[0] + shift);
      return h;
    };
    return v;
  });
}

LyapunovBundle cubic_v4_bundle(std::size_t dim) {
  return LyapunovBundle("cubic_V4", dim, [dim](double, const EmpiricalMeasure& mu) {
    if (mu.dim() != dim) throw DimensionMismatch("cubic_V4 bound to a measure of the wrong dimension");
    double m4 = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
      const double s = squared_norm(mu.point(i));
      m4 += s * s;
    }
    m4 /= static_cast<double>(mu.size());
    BoundBundle v;
    v.value = [m4](std::span<const double>) { return m4; };
    v.dt = [](std::span<const double>) { return 0.0; };
    v.grad_x = [dim](std::span<const double>) { return zero_vector(dim); };
    v.hess_x = [dim](std::span<const double>) { return zero_matrix(dim); };
    v.dmu = [](std::span<const double>, std::span<const double> y) {
      const double s = squared_norm(y);
      Vector out(y.size());
      for (std::size_t i = 0; i < y.size(); ++i) out[i] = 4.0 * s * y[i];
      return out;
    };
    v.dy_dmu = [dim](std::span<const double>, std::span<const double> y) {
      const double s = squared_norm(y);
      Matrix h(dim, dim);
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) h(i, j) = 8.0 * y[i] * y[j] + (i == j ? 4.0 * s : 0.0);
      return h;
    };
    return v;
  });
}

LyapunovBundle abs_pow_bundle(double r, std::size_t dim) {
  if (!(r >= 2.0)) throw InvalidArgument("abs_pow_r needs r >= 2 for a C^2 function");
  return LyapunovBundle(
      "abs_pow_r", dim,
      [r, dim](double, const EmpiricalMeasure&) {
        BoundBundle v;
        v.value = [r](std::span<const double> x) { return std::pow(norm(x), r); };
        v.dt = [](std::span<const double>) { return 0.0; };
        v.grad_x = [r](std::span<const double> x) {
          const double n = norm(x);
          const double c = n > 0.0 ? r * std::pow(n, r - 2.0) : 0.0;
          Vector g(x.size());
          for (std::size_t i = 0; i < x.size(); ++i) g[i] = c * x[i];
          return g;
        };
        v.hess_x = [r, dim](std::span<const double> x) {
          const double n = norm(x);
          Matrix h(dim, dim);
          if (n == 0.0) {
            if (r == 2.0)
              for (std::size_t i = 0; i < dim; ++i) h(i, i) = 2.0;
            return h;
          }
          const double c = r * std::pow(n, r - 2.0);
          const double e = r * (r - 2.0) * std::pow(n, r - 4.0);
          for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) h(i, j) = e * x[i] * x[j] + (i == j ? c : 0.0);
          return h;
        };
        v.dmu = [dim](std::span<const double>, std::span<const double>) { return zero_vector(dim); };
        v.dy_dmu = [dim](std::span<const double>, std::span<const double>) { return zero_matrix(dim); };
        return v;
      },
      true);
}

std::vector<std::string> builtin_bundle_names() { return {"example2_V", "cubic_V4", "abs_pow_r"}; }

LyapunovBundle make_builtin_bundle(const std::string& name, double alpha, double r, std::size_t dim) {
  if (name == "example2_V") {
    if (dim != 1) throw DimensionMismatch("example2_V is defined on R only");
    return example2_bundle(alpha);
  }
  if (name == "cubic_V4") return cubic_v4_bundle(dim);
  if (name == "abs_pow_r") return abs_pow_bundle(r, dim);
  throw UnknownBundle("unknown Lyapunov bundle '" + name + "'");
}

double generator(const LyapunovBundle& bundle, const CoefficientPair& coeffs, double t, std::span<const double> x,
                 const EmpiricalMeasure& mu) {
  return BoundGenerator(bundle, coeffs, t, mu)(x);
}

double integrated_generator(const LyapunovBundle& bundle, const CoefficientPair& coeffs, double t,
                            const EmpiricalMeasure& mu) {
  const BoundGenerator gen(bundle, coeffs, t, mu);
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) s += gen(mu.point(i));
  return s / static_cast<double>(mu.size());
}

double integrated_value(const LyapunovBundle& bundle, double t, const EmpiricalMeasure& mu) {
  const BoundBundle v = bundle.bind(t, mu);
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) s += v.value(mu.point(i));
  return s / static_cast<double>(mu.size());
}

double example2_integrated_generator_closed_form(const EmpiricalMeasure& mu, double alpha) {
  if (mu.dim() != 1) throw DimensionMismatch("closed form is for measures on R");
  const double a1 = raw_moment_1d(mu, 1);
  const double a2 = raw_moment_1d(mu, 2);
  const double a3 = raw_moment_1d(mu, 3);
  const double a4 = raw_moment_1d(mu, 4);
  const double al2 = alpha * alpha;
  return -2.0 * a4 - (6.0 * al2 + 12.0 * alpha) * a2 * a2 + 4.0 * alpha * a1 * a3 +
         (2.0 * al2 * al2 - 2.0 * al2) * a1 * a1 * a2;
}

DriftInequalityReport check_drift_inequality(const LyapunovBundle& bundle, const CoefficientPair& coeffs,
                                             const std::vector<EmpiricalMeasure>& clouds, double gamma, double t,
                                             double r) {
  if (clouds.empty()) throw InvalidArgument("check_drift_inequality needs at least one cloud");
  if (!(gamma >= 0.0)) throw NonpositiveParameter("gamma must be >= 0");
  DriftInequalityReport rep;
  rep.max_margin = -std::numeric_limits<double>::infinity();
  rep.c3_witness.kind = "growth_c3";
  for (std::size_t c = 0; c < clouds.size(); ++c) {
    const auto& mu = clouds[c];
    const BoundGenerator gen(bundle, coeffs, t, mu);
    const double mr = mu.raw_abs_moment(r);
    double lv = 0.0;
    double v = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
      const auto x = mu.point(i);
      const double lvi = gen(x);
      const double vi = gen.value(x);
      lv += lvi;
      v += vi;
      const double num = std::abs(lvi + gamma * vi);
      const double den = std::pow(norm(x), r) + mr;
      const double ratio = den > 0.0 ? num / den : (num > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
      if (ratio > rep.growth_c3) {
        rep.growth_c3 = ratio;
        rep.c3_witness.cloud_index = c;
        rep.c3_witness.x = to_vector(x);
        rep.c3_witness.value = ratio;
      }
    }
    const double n = static_cast<double>(mu.size());
    const double margin = lv / n + gamma * v / n;
    if (margin > rep.max_margin) {
      rep.max_margin = margin;
      rep.worst_cloud = c;
    }
  }
  return rep;
}

SandwichReport sandwich_check(const LyapunovBundle& bundle, const std::vector<EmpiricalMeasure>& clouds, double r,
                              double c1, double c2, double c2p, double t) {
  if (!(c1 > 0.0)) throw NonpositiveParameter("sandwich lower constant C1 must be positive");
  if (clouds.empty()) throw InvalidArgument("sandwich_check needs at least one cloud");
  SandwichReport rep;
  rep.max_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < clouds.size(); ++c) {
    const auto& mu = clouds[c];
    const BoundBundle v = bundle.bind(t, mu);
    const double mr = mu.raw_abs_moment(r);
    for (std::size_t i = 0; i < mu.size(); ++i) {
      const auto x = mu.point(i);
      const double xr = std::pow(norm(x), r);
      const double val = v.value(x);
      const double lower = c1 * xr - val;
      const double upper = val - c2 * xr - c2p * mr;
      const double worst = std::max(lower, upper);
      // Equality cases are computed through different expressions; allow round-off.
      const double scale = 1.0 + std::abs(val) + c1 * xr + c2 * xr + std::abs(c2p) * mr;
      if (worst > 1e-12 * scale) rep.violated = true;
      if (worst > rep.max_violation) {
        rep.max_violation = worst;
        rep.witness.kind = lower >= upper ? "sandwich_lower" : "sandwich_upper";
        rep.witness.cloud_index = c;
        rep.witness.x = to_vector(x);
        rep.witness.value = worst;
      }
    }
  }
  return rep;
}

DecayFit fit_log_slope(std::span<const double> times, std::span<const double> values, std::pair<double, double> window,
                       double floor) {
  if (times.size() != values.size()) throw InvalidArgument("times and values differ in length");
  std::vector<double> t;
  std::vector<double> y;
  for (std::size_t j = 0; j < times.size(); ++j) {
    if (times[j] < window.first || times[j] > window.second) continue;
    const double v = values[j] - floor;
    if (!(v > 0.0)) throw NonpositiveMoment("non-positive value at t = " + std::to_string(times[j]));
    t.push_back(times[j]);
    y.push_back(std::log(v));
  }
  if (t.size() < 5) throw EmptyWindow("fit window holds fewer than 5 snapshots");
  const LinearFit fit = least_squares(t, y);
  return {fit.slope, fit.r2};
}

DecayFit fit_decay_rate(const MomentTrajectory& traj, double order, std::pair<double, double> window, double floor) {
  return fit_log_slope(traj.times, traj.values[traj.order_index(order)], window, floor);
}

std::pair<double, double> default_window(std::span<const double> times) {
  if (times.empty()) throw EmptyWindow("empty trajectory");
  const double lo = times.front();
  const double hi = times.back();
  return {lo + 0.1 * (hi - lo), hi};
}

double decay_bound_ratio(const MomentTrajectory& traj, double r, double c1, double c2, double c2p, double gamma) {
  if (!(c1 > 0.0)) throw NonpositiveParameter("C1 must be positive");
  const std::size_t k = traj.order_index(r);
  const auto& m = traj.values[k];
  const auto& se = traj.standard_errors[k];
  if (m.empty()) throw EmptyWindow("empty trajectory");
  const double lead = (c2 + c2p) / c1 * m.front();
  double worst = 0.0;
  for (std::size_t j = 0; j < m.size(); ++j) {
    if (!(m[j] > 0.0)) continue;
    const double bound = lead * std::exp(-gamma * (traj.times[j] - traj.times.front())) * (1.0 + 5.0 * se[j] / m[j]);
    worst = std::max(worst, bound > 0.0 ? m[j] / bound : std::numeric_limits<double>::infinity());
  }
  return worst;
}

std::string StabilityReport::to_json() const {
  nlohmann::json j;
  j["gamma_hat"] = gamma_hat;
  j["gamma_claimed"] = gamma_claimed;
  j["r"] = r;
  j["window"] = {window.first, window.second};
  j["margins"] = {{"sandwich", margin_sandwich}, {"drift", margin_drift}, {"growth_c3", growth_c3}};
  j["witnesses"] = nlohmann::json::array();
  for (const auto& w : witnesses) j["witnesses"].push_back(witness_json(w));
  return j.dump(2);
}

namespace {

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double e : v) m = std::max(m, std::abs(e));
  return m;
}

EmpiricalMeasure moved(const EmpiricalMeasure& mu, std::size_t j, std::size_t k, double h) {
  std::vector<double> pts(mu.flat().begin(), mu.flat().end());
  pts[j * mu.dim() + k] += h;
  return EmpiricalMeasure(std::move(pts), mu.dim());
}

void finish(DerivativeCheck& chk, double reference_scale) {
  const double floor = 1e-9 * (1.0 + reference_scale);
  const double e0 = chk.errors.front();
  const double e2 = chk.errors.back();
  if (e0 <= floor) {
    // Exact up to round-off at every step: nothing to fit.
    chk.observed_order = std::numeric_limits<double>::quiet_NaN();
    chk.passed = true;
    return;
  }
  chk.observed_order = e2 > 0.0 ? std::log2(e0 / e2) / std::log2(chk.steps.front() / chk.steps.back())
                                : std::numeric_limits<double>::infinity();
  chk.passed = e2 < e0 && chk.observed_order >= chk.expected_order - 0.3;
}

}  // namespace

std::vector<DerivativeCheck> validate_bundle(const LyapunovBundle& bundle, const std::vector<BundleSample>& samples,
                                             double h0) {
  if (samples.empty()) throw InvalidArgument("validate_bundle needs samples");
  if (!(h0 > 0.0)) throw NonpositiveParameter("h0 must be positive");
  const std::vector<double> steps{h0, h0 / 2.0, h0 / 4.0};
  const std::size_t d = bundle.dim();

  DerivativeCheck dt{"dt", steps, {}, 2.0};
  DerivativeCheck grad{"grad_x", steps, {}, 2.0};
  DerivativeCheck hess{"hess_x", steps, {}, 2.0};
  DerivativeCheck dmu{"dmu", steps, {}, 1.0};
  DerivativeCheck dydmu{"dy_dmu", steps, {}, 2.0};
  double s_dt = 0.0, s_grad = 0.0, s_hess = 0.0, s_dmu = 0.0, s_dydmu = 0.0;

  for (double h : steps) {
    double e_dt = 0.0, e_grad = 0.0, e_hess = 0.0, e_dmu = 0.0, e_dydmu = 0.0;
    for (const auto& smp : samples) {
      if (smp.x.size() != d || smp.mu.dim() != d) throw DimensionMismatch("bundle sample of the wrong dimension");
      const BoundBundle v = bundle.bind(smp.t, smp.mu);
      const auto& x = smp.x;
      const double v0 = v.value(x);

      const double fd_t = (bundle.bind(smp.t + h, smp.mu).value(x) - bundle.bind(smp.t - h, smp.mu).value(x)) / (2 * h);
      const double an_t = v.dt(x);
      e_dt = std::max(e_dt, std::abs(fd_t - an_t));
      s_dt = std::max(s_dt, std::abs(an_t));

      const Vector g = v.grad_x(x);
      const Matrix hx = v.hess_x(x);
      s_grad = std::max(s_grad, max_abs(g));
      s_hess = std::max(s_hess, max_abs(hx.data));
      for (std::size_t k = 0; k < d; ++k) {
        Vector xp = x, xm = x;
        xp[k] += h;
        xm[k] -= h;
        const double vp = v.value(xp);
        const double vm = v.value(xm);
        e_grad = std::max(e_grad, std::abs((vp - vm) / (2 * h) - g[k]));
        e_hess = std::max(e_hess, std::abs((vp - 2 * v0 + vm) / (h * h) - hx(k, k)));
        for (std::size_t l = k + 1; l < d; ++l) {
          Vector pp = x, pm = x, mp = x, mm = x;
          pp[k] += h, pp[l] += h;
          pm[k] += h, pm[l] -= h;
          mp[k] -= h, mp[l] += h;
          mm[k] -= h, mm[l] -= h;
          const double fd = (v.value(pp) - v.value(pm) - v.value(mp) + v.value(mm)) / (4 * h * h);
          e_hess = std::max(e_hess, std::abs(fd - hx(k, l)));
          e_hess = std::max(e_hess, std::abs(fd - hx(l, k)));
        }
      }

      // L-derivative probes at the first, middle and last particle.
      const std::size_t n = smp.mu.size();
      for (std::size_t j : {std::size_t{0}, n / 2, n - 1}) {
        const auto y = smp.mu.point(j);
        const Vector an = v.dmu(x, y);
        const Matrix an_y = v.dy_dmu(x, y);
        s_dmu = std::max(s_dmu, max_abs(an));
        s_dydmu = std::max(s_dydmu, max_abs(an_y.data));
        for (std::size_t k = 0; k < d; ++k) {
          const double probe =
              (bundle.bind(smp.t, moved(smp.mu, j, k, h)).value(x) - v0) * static_cast<double>(n) / h;
          e_dmu = std::max(e_dmu, std::abs(probe - an[k]));
          Vector yp(y.begin(), y.end()), ym(y.begin(), y.end());
          yp[k] += h;
          ym[k] -= h;
          const Vector gp = v.dmu(x, yp);
          const Vector gm = v.dmu(x, ym);
          for (std::size_t i = 0; i < d; ++i)
            e_dydmu = std::max(e_dydmu, std::abs((gp[i] - gm[i]) / (2 * h) - an_y(i, k)));
        }
      }
    }
    dt.errors.push_back(e_dt);
    grad.errors.push_back(e_grad);
    hess.errors.push_back(e_hess);
    dmu.errors.push_back(e_dmu);
    dydmu.errors.push_back(e_dydmu);
  }
  finish(dt, s_dt);
  finish(grad, s_grad);
  finish(hess, s_hess);
  finish(dmu, s_dmu);
  finish(dydmu, s_dydmu);
  return {dt, grad, hess, dmu, dydmu};
}

}  // namespace mvsde
