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
#include "mvsde_cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "json.hpp"
#include "mvsde/error.hpp"
#include "mvsde/invariant.hpp"
#include "mvsde/lyapunov.hpp"
#include "mvsde/measure_io.hpp"
#include "mvsde/rng.hpp"
#include "mvsde/sampling.hpp"

namespace mvsde::cli {
namespace {

namespace fs = std::filesystem;

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw ConfigError("failed writing '" + path.string() + "'");
}

void log_line(const fs::path& dir, const std::string& msg) {
  std::ofstream log(dir / "run.log", std::ios::app);
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  log << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ") << ' ' << msg << '\n';
}

CoefficientPair make_coefficients(const ExperimentConfig& cfg, const ModelRegistry& registry) {
  CoefficientPair c = registry.at(cfg.model.name).make(cfg.model.params);
  if (cfg.model.truncate_at) c = truncate(c, *cfg.model.truncate_at);
  return c;
}

EmpiricalMeasure make_init(const ExperimentConfig& cfg, std::size_t dim) {
  const std::size_t n = cfg.sim.n_particles;
  if (cfg.init.kind == "dirac") return EmpiricalMeasure::dirac_origin(n, dim);
  if (cfg.init.kind == "gaussian")
    return gaussian_cloud(n, dim, cfg.init.mean, cfg.init.std, split_seed(cfg.sim.seed, "init"), cfg.init.symmetric);
  EmpiricalMeasure mu = read_csv(cfg.init.path);
  if (mu.size() != n || mu.dim() != dim)
    throw ConfigError("key 'init.path': cloud has " + std::to_string(mu.size()) + " points in R^" +
                      std::to_string(mu.dim()) + ", expected " + std::to_string(n) + " in R^" + std::to_string(dim));
  return mu;
}

// Zero-mean displacement: +delta on even particles, -delta on odd ones.
EmpiricalMeasure displaced(const EmpiricalMeasure& x, double delta) {
  std::vector<double> pts(x.flat().begin(), x.flat().end());
  const std::size_t d = x.dim();
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t k = 0; k < d; ++k) pts[i * d + k] += (i % 2 == 0 ? delta : -delta);
  return EmpiricalMeasure(std::move(pts), d);
}

nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

int cmd_simulate(const ExperimentConfig& cfg, const CoefficientPair& coeffs, const fs::path& dir, std::ostream& out) {
  const RunResult res = run(make_init(cfg, coeffs.dim()), coeffs, cfg.sim);
  write_text(dir / "moments.csv", res.moments.to_csv());
  write_text(dir / "terminal_cloud.csv", to_csv(res.ensemble.cloud));
  out << "simulate: " << cfg.sim.num_steps() << " steps, " << cfg.sim.n_particles << " particles\n";
  return kExitOk;
}

int cmd_stability(const ExperimentConfig& cfg, const CoefficientPair& coeffs, const fs::path& dir, std::ostream& out) {
  const auto& p = cfg.stability;
  const std::size_t dim = coeffs.dim();
  const auto alpha_it = cfg.model.params.find("alpha");
  const double alpha = alpha_it == cfg.model.params.end() ? 0.0 : alpha_it->second;
  const LyapunovBundle bundle = make_builtin_bundle(p.bundle, alpha, p.r, dim);

  const RunResult res = run(make_init(cfg, dim), coeffs, cfg.sim);
  write_text(dir / "moments.csv", res.moments.to_csv());

  StabilityReport rep;
  rep.r = p.r;
  rep.gamma_claimed = p.gamma_claimed;
  rep.window = p.window ? *p.window : default_window(res.moments.times);
  rep.gamma_hat = fit_decay_rate(res.moments, p.r, rep.window, p.floor).gamma_hat;

  std::vector<EmpiricalMeasure> clouds;
  const std::uint64_t cloud_seed = split_seed(cfg.design.seed, "stability.clouds");
  for (std::size_t k = 0; k < p.clouds; ++k) clouds.push_back(sample_cloud(cfg.design.cloud_family, dim, cloud_seed, k));
  const SandwichReport sw = sandwich_check(bundle, clouds, p.r, p.c1, p.c2, p.c2p);
  const DriftInequalityReport dr = check_drift_inequality(bundle, coeffs, clouds, p.gamma, 0.0, p.r);
  rep.margin_sandwich = sw.max_violation;
  rep.margin_drift = dr.max_margin;
  rep.growth_c3 = dr.growth_c3;
  rep.witnesses.push_back(sw.witness);
  rep.witnesses.push_back({"drift", dr.worst_cloud, {}, dr.max_margin});
  rep.witnesses.push_back(dr.c3_witness);
  write_text(dir / "stability_report.json", rep.to_json() + "\n");

  out << "stability: gamma_hat = " << format_double(rep.gamma_hat) << ", gamma_claimed = "
      << format_double(rep.gamma_claimed) << ", sandwich margin = " << format_double(rep.margin_sandwich)
      << ", drift margin = " << format_double(rep.margin_drift) << '\n';
  return kExitOk;
}

int cmd_contraction(const ExperimentConfig& cfg, const CoefficientPair& coeffs, const fs::path& dir,
                    std::ostream& out) {
  const EmpiricalMeasure x = make_init(cfg, coeffs.dim());
  const ContractionEstimate est = contraction_rate(coeffs, x, displaced(x, cfg.contraction.displacement), cfg.sim);
  write_text(dir / "coupled.csv", est.trajectory.to_csv());
  nlohmann::json j;
  j["rate"] = number_or_null(est.rate);
  j["r2"] = number_or_null(est.r2);
  j["w2_rate"] = number_or_null(est.w2_rate);
  write_text(dir / "contraction.json", j.dump(2) + "\n");
  out << "contraction: rate = " << format_double(est.rate) << " (r2 = " << format_double(est.r2) << ")\n";
  return kExitOk;
}

int cmd_invariant(const ExperimentConfig& cfg, const CoefficientPair& coeffs, const fs::path& dir,
                  std::ostream& out) {
  const auto& p = cfg.invariant;
  ErgodicityReport rep;
  rep.cauchy_table = cauchy_probe(coeffs, cfg.sim, p.t_grid, p.s_grid, p.bootstrap);
  write_text(dir / "cauchy_table.csv", cauchy_table_csv(rep.cauchy_table));

  const auto alpha_it = cfg.model.params.find("alpha");
  if (p.stationary) {
    rep.stationary = stationary_ou(alpha_it->second, cfg.sim);
    write_text(dir / "terminal_cloud.csv", to_csv(rep.stationary->terminal));
  } else {
    const RunResult res = run(EmpiricalMeasure::dirac_origin(cfg.sim.n_particles, coeffs.dim()), coeffs, cfg.sim);
    write_text(dir / "terminal_cloud.csv", to_csv(res.ensemble.cloud));
  }
  if (p.contraction) {
    const EmpiricalMeasure x = make_init(cfg, coeffs.dim());
    const ContractionEstimate est = contraction_rate(coeffs, x, displaced(x, p.displacement), cfg.sim);
    rep.contraction_rate = est.rate;
    rep.contraction_r2 = est.r2;
  }
  if (alpha_it != cfg.model.params.end() && alpha_it->second > 0.0)
    rep.self_consistency = solve_self_consistency(alpha_it->second);
  else
    rep.self_consistency = {std::nan(""), "not applicable to model " + cfg.model.name};
  write_text(dir / "ergodicity_report.json", rep.to_json() + "\n");

  out << "invariant: " << rep.cauchy_table.size() << " Cauchy rows";
  if (rep.stationary) out << ", terminal variance = " << format_double(rep.stationary->shape.variance);
  if (rep.contraction_rate) out << ", contraction rate = " << format_double(*rep.contraction_rate);
  out << '\n';
  return kExitOk;
}

int cmd_check(const ExperimentConfig& cfg, const CoefficientPair& coeffs, const fs::path& dir, std::ostream& out) {
  out << std::left << std::setw(12) << "assumption" << std::setw(26) << "best_constant" << std::setw(10) << "violated"
      << "skipped\n";
  for (Assumption a : cfg.check.assumptions) {
    MarginReport rep;
    switch (a) {
      case Assumption::A1: rep = check_local_lipschitz(coeffs, cfg.design, true); break;
      case Assumption::B1: rep = check_local_lipschitz(coeffs, cfg.design, false); break;
      case Assumption::A2: rep = check_growth(coeffs, cfg.design, GrowthForm::A2); break;
      case Assumption::B2: rep = check_growth(coeffs, cfg.design, GrowthForm::B2); break;
      case Assumption::A3: rep = check_continuity_in_measure(coeffs, cfg.design); break;
      case Assumption::A4:
      case Assumption::B3:
        rep = check_local_with_decay(coeffs, cfg.design, cfg.check.decay_k, cfg.check.delta, a);
        break;
      case Assumption::H: rep = check_strong_monotonicity(coeffs, cfg.design); break;
    }
    const std::string stem = "margin_" + to_string(a);
    std::string mu_file, nu_file;
    if (rep.witness.mu) {
      mu_file = stem + "_mu.csv";
      write_text(dir / mu_file, to_csv(*rep.witness.mu));
    }
    if (rep.witness.nu) {
      nu_file = stem + "_nu.csv";
      write_text(dir / nu_file, to_csv(*rep.witness.nu));
    }
    write_text(dir / (stem + ".json"), rep.to_json(mu_file, nu_file) + "\n");
    out << std::left << std::setw(12) << to_string(a) << std::setw(26) << format_double(rep.best_constant)
        << std::setw(10) << (rep.violated ? "yes" : "no") << rep.skipped << '\n';
  }
  return kExitOk;
}

}  // namespace

int run_task(const ExperimentConfig& cfg, const ModelRegistry& registry, std::ostream& out, std::ostream& err) {
  fs::path dir;
  try {
    dir = cfg.output_dir;
    fs::create_directories(dir);
    write_text(dir / "config.resolved", cfg.to_ini());
    log_line(dir, "start " + to_string(cfg.task));
    const CoefficientPair coeffs = make_coefficients(cfg, registry);
    int code = kExitOk;
    switch (cfg.task) {
      case TaskKind::simulate: code = cmd_simulate(cfg, coeffs, dir, out); break;
      case TaskKind::stability: code = cmd_stability(cfg, coeffs, dir, out); break;
      case TaskKind::contraction: code = cmd_contraction(cfg, coeffs, dir, out); break;
      case TaskKind::invariant: code = cmd_invariant(cfg, coeffs, dir, out); break;
      case TaskKind::check: code = cmd_check(cfg, coeffs, dir, out); break;
    }
    log_line(dir, "done " + to_string(cfg.task));
    return code;
  } catch (const NonFiniteState& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const EmptyWindow& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const NonpositiveMoment& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const EmptyDecay& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const AssignmentTooLarge& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const fs::filesystem_error& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

void list_presets(const ModelRegistry& registry, std::ostream& out) {
  out << "models:\n";
  for (const auto& name : registry.names()) {
    const ModelEntry& e = registry.at(name);
    out << "  " << name << "  (R^" << e.dim << ")  " << e.description;
    if (!e.defaults.empty()) {
      out << "  [";
      bool first = true;
      for (const auto& [k, v] : e.defaults) {
        out << (first ? "" : ", ") << k << " = " << format_double(v);
        first = false;
      }
      out << ']';
    }
    out << '\n';
  }
  out << "lyapunov bundles:\n";
  for (const auto& b : builtin_bundle_names()) out << "  " << b << '\n';
}

}  // namespace mvsde::cli
