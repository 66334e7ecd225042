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
#include "mvsde_cli/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "mvsde/error.hpp"
#include "mvsde/lyapunov.hpp"
#include "mvsde/measure_io.hpp"

namespace mvsde::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Flat "section.key" view of the file. Every key read is consumed; whatever
// remains at the end is unknown.
class Keys {
 public:
  explicit Keys(const boost::property_tree::ptree& tree) {
    for (const auto& [section, node] : tree) {
      if (node.empty()) {
        kv_[section] = trim(node.data());
        continue;
      }
      for (const auto& [key, leaf] : node) kv_[section + "." + key] = trim(leaf.data());
    }
  }

  std::optional<std::string> take(const std::string& key) {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return std::nullopt;
    std::string v = it->second;
    kv_.erase(it);
    return v;
  }

  std::string require(const std::string& key) {
    auto v = take(key);
    if (!v) throw ConfigError("missing required key '" + key + "'");
    return *v;
  }

  std::string text(const std::string& key, const std::string& def) { return take(key).value_or(def); }

  double number(const std::string& key, double def) {
    const auto v = take(key);
    return v ? to_number(key, *v) : def;
  }
  double require_number(const std::string& key) { return to_number(key, require(key)); }
  std::optional<double> optional_number(const std::string& key) {
    const auto v = take(key);
    if (!v) return std::nullopt;
    return to_number(key, *v);
  }

  std::uint64_t integer(const std::string& key, std::uint64_t def) {
    const auto v = take(key);
    return v ? to_integer(key, *v) : def;
  }
  std::uint64_t require_integer(const std::string& key) { return to_integer(key, require(key)); }

  bool boolean(const std::string& key, bool def) {
    const auto v = take(key);
    if (!v) return def;
    if (*v == "true" || *v == "1" || *v == "yes") return true;
    if (*v == "false" || *v == "0" || *v == "no") return false;
    throw ConfigError("key '" + key + "': expected true or false, got '" + *v + "'");
  }

  std::vector<double> numbers(const std::string& key, const std::vector<double>& def) {
    const auto v = take(key);
    return v ? to_numbers(key, *v) : def;
  }
  std::vector<double> require_numbers(const std::string& key) { return to_numbers(key, require(key)); }

  void reject_leftovers(const std::string& context) const {
    if (kv_.empty()) return;
    throw ConfigError("unknown key '" + kv_.begin()->first + "'" + context);
  }

  static double to_number(const std::string& key, const std::string& v) {
    if (v.empty()) throw ConfigError("key '" + key + "': empty value");
    char* end = nullptr;
    errno = 0;
    const double d = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size() || errno == ERANGE || !std::isfinite(d))
      throw ConfigError("key '" + key + "': expected a finite number, got '" + v + "'");
    return d;
  }

  static std::uint64_t to_integer(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
      throw ConfigError("key '" + key + "': expected a non-negative integer, got '" + v + "'");
    return out;
  }

  static std::vector<double> to_numbers(const std::string& key, const std::string& v) {
    std::vector<double> out;
    if (trim(v).empty()) return out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_number(key, trim(item)));
    return out;
  }

 private:
  std::map<std::string, std::string> kv_;
};

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
  return s;
}

void require_increasing(const std::string& key, const std::vector<double>& v) {
  if (v.empty()) throw ConfigError("key '" + key + "' must list at least one value");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < 0.0) throw ConfigError("key '" + key + "' must be non-negative");
    if (i > 0 && !(v[i] > v[i - 1])) throw ConfigError("key '" + key + "' must be increasing");
  }
}

std::size_t to_size(const std::string& key, std::uint64_t v, std::uint64_t min) {
  if (v < min) throw ConfigError("key '" + key + "' must be at least " + std::to_string(min));
  return static_cast<std::size_t>(v);
}

double default_gamma_claimed(const std::string& bundle, const ModelSpec& model, double r, bool& known) {
  known = true;
  const auto& p = model.params;
  if (bundle == "example2_V" && model.name == "landau_linear") return -2.0 + 4.0 * p.at("alpha");
  if (bundle == "cubic_V4" && model.name == "cubic") return -4.0 * (p.at("L") - 0.375);
  if (bundle == "abs_pow_r" && model.name == "mean_field_ou" && r == 2.0) return -2.0 * p.at("alpha");
  known = false;
  return 0.0;
}

void parse_model(Keys& keys, ExperimentConfig& cfg, const ModelRegistry& registry) {
  cfg.model.name = keys.require("model.name");
  if (!registry.contains(cfg.model.name))
    throw ConfigError("key 'model.name': unknown model '" + cfg.model.name + "'");
  const ModelEntry& entry = registry.at(cfg.model.name);
  for (const auto& [param, def] : entry.defaults) cfg.model.params[param] = keys.number("model." + param, def);
  cfg.model.truncate_at = keys.optional_number("model.truncate");
  if (cfg.model.truncate_at && !(*cfg.model.truncate_at > 0.0))
    throw ConfigError("key 'model.truncate' must be positive");
}

void parse_sim(Keys& keys, ExperimentConfig& cfg, const ModelRegistry& registry, const Overrides& ov) {
  SimConfig& s = cfg.sim;
  s.dt = keys.require_number("sim.dt");
  s.t_end = keys.require_number("sim.t_end");
  s.n_particles = to_size("sim.n_particles", keys.require_integer("sim.n_particles"), 2);
  s.seed = keys.integer("sim.seed", 0);
  if (ov.seed) s.seed = *ov.seed;
  const std::string taming = keys.text("sim.taming", "auto");
  if (taming == "none") {
    s.taming = Taming::none;
  } else if (taming == "tamed") {
    s.taming = Taming::tamed;
  } else if (taming == "auto") {
    try {
      s.taming = registry.at(cfg.model.name).make(cfg.model.params).preferred_taming();
    } catch (const Error& e) {
      throw ConfigError(std::string("model parameters rejected: ") + e.what());
    }
  } else {
    throw ConfigError("key 'sim.taming': expected none, tamed or auto, got '" + taming + "'");
  }
  s.record_every = to_size("sim.record_every", keys.integer("sim.record_every", 10), 1);
  s.moment_orders = keys.numbers("sim.moment_orders", {2.0});
  if (s.moment_orders.empty()) throw ConfigError("key 'sim.moment_orders' must list at least one order");
  try {
    s.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("section [sim]: ") + e.what());
  }
}

void parse_init(Keys& keys, ExperimentConfig& cfg) {
  InitSpec& in = cfg.init;
  in.kind = keys.text("init.kind", "gaussian");
  if (in.kind == "gaussian") {
    in.mean = keys.number("init.mean", 0.0);
    in.std = keys.number("init.std", 1.0);
    if (!(in.std >= 0.0)) throw ConfigError("key 'init.std' must be non-negative");
    in.symmetric = keys.boolean("init.symmetric", false);
    if (in.symmetric && cfg.sim.n_particles % 2 != 0)
      throw ConfigError("key 'init.symmetric' needs an even sim.n_particles");
  } else if (in.kind == "file") {
    in.path = keys.require("init.path");
  } else if (in.kind != "dirac") {
    throw ConfigError("key 'init.kind': expected dirac, gaussian or file, got '" + in.kind + "'");
  }
}

void parse_design(Keys& keys, ExperimentConfig& cfg) {
  SampleDesign& d = cfg.design;
  d.n_points = to_size("design.n_points", keys.integer("design.n_points", d.n_points), 1);
  d.radius_grid = keys.numbers("design.radius_grid", d.radius_grid);
  d.seed = keys.integer("design.seed", cfg.sim.seed);
  d.r = keys.number("design.r", d.r);
  d.time_grid = keys.numbers("design.time_grid", d.time_grid);
  CloudFamily& f = d.cloud_family;
  f.cloud_size = to_size("design.cloud_size", keys.integer("design.cloud_size", f.cloud_size), 1);
  f.components = to_size("design.components", keys.integer("design.components", f.components), 1);
  f.mean_lo = keys.number("design.mean_lo", f.mean_lo);
  f.mean_hi = keys.number("design.mean_hi", f.mean_hi);
  f.scale_lo = keys.number("design.scale_lo", f.scale_lo);
  f.scale_hi = keys.number("design.scale_hi", f.scale_hi);
  f.stress_every = static_cast<std::size_t>(keys.integer("design.stress_every", f.stress_every));
  f.dilation = keys.number("design.dilation", f.dilation);
  try {
    d.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("section [design]: ") + e.what());
  }
}

void parse_stability(Keys& keys, ExperimentConfig& cfg) {
  StabilityParams& p = cfg.stability;
  p.bundle = keys.require("task.bundle");
  const auto names = builtin_bundle_names();
  if (std::find(names.begin(), names.end(), p.bundle) == names.end())
    throw ConfigError("key 'task.bundle': unknown Lyapunov bundle '" + p.bundle + "'");
  if (p.bundle == "example2_V" && !cfg.model.params.count("alpha"))
    throw ConfigError("key 'task.bundle': example2_V needs a model with an alpha parameter");
  p.r = keys.number("task.r", 4.0);
  if (!(p.r >= 2.0)) throw ConfigError("key 'task.r' must be >= 2");
  bool known = false;
  const double claimed = default_gamma_claimed(p.bundle, cfg.model, p.r, known);
  if (known)
    p.gamma_claimed = keys.number("task.gamma_claimed", claimed);
  else
    p.gamma_claimed = keys.require_number("task.gamma_claimed");
  if (p.gamma_claimed < 0.0)
    p.gamma = keys.number("task.gamma", -p.gamma_claimed);
  else
    p.gamma = keys.require_number("task.gamma");
  if (!(p.gamma >= 0.0)) throw ConfigError("key 'task.gamma' must be non-negative");
  const bool ex2 = p.bundle == "example2_V";
  const double alpha = ex2 ? cfg.model.params.at("alpha") : 0.0;
  p.c1 = keys.number("task.c1", 1.0);
  p.c2 = keys.number("task.c2", ex2 ? 2.0 : 1.0);
  p.c2p = keys.number("task.c2p", ex2 ? 2.0 * alpha * alpha : 0.0);
  if (!(p.c1 > 0.0)) throw ConfigError("key 'task.c1' must be positive");
  p.floor = keys.number("task.floor", 0.0);
  if (const auto w = keys.take("task.window")) {
    const auto v = Keys::to_numbers("task.window", *w);
    if (v.size() != 2 || !(v[0] < v[1])) throw ConfigError("key 'task.window' must be 'lo,hi' with lo < hi");
    p.window = std::make_pair(v[0], v[1]);
  }
  p.clouds = to_size("task.clouds", keys.integer("task.clouds", 64), 1);
  if (std::find(cfg.sim.moment_orders.begin(), cfg.sim.moment_orders.end(), p.r) == cfg.sim.moment_orders.end())
    cfg.sim.moment_orders.push_back(p.r);
}

void parse_invariant(Keys& keys, ExperimentConfig& cfg) {
  InvariantParams& p = cfg.invariant;
  p.t_grid = keys.require_numbers("task.t_grid");
  require_increasing("task.t_grid", p.t_grid);
  p.s_grid = keys.require_numbers("task.s_grid");
  require_increasing("task.s_grid", p.s_grid);
  p.bootstrap = to_size("task.bootstrap", keys.integer("task.bootstrap", 200), 2);
  p.stationary = keys.boolean("task.stationary", cfg.model.name == "mean_field_ou");
  if (p.stationary && cfg.model.name != "mean_field_ou")
    throw ConfigError("key 'task.stationary': the stationary comparison needs model mean_field_ou");
  p.contraction = keys.boolean("task.contraction", true);
  p.displacement = keys.number("task.displacement", 0.5);
}

void parse_check(Keys& keys, ExperimentConfig& cfg) {
  CheckParams& p = cfg.check;
  const std::string list = keys.require("task.assumptions");
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      p.assumptions.push_back(parse_assumption(item));
    } catch (const Error&) {
      throw ConfigError("key 'task.assumptions': unknown assumption '" + item + "'");
    }
  }
  if (p.assumptions.empty()) throw ConfigError("key 'task.assumptions' must list at least one assumption");
  p.decay_k = keys.number("task.decay_k", 1.0);
  p.delta = keys.number("task.delta", 1.0);
  if (!(p.decay_k > 0.0) || !(p.delta > 0.0)) throw ConfigError("keys 'task.decay_k' and 'task.delta' must be positive");
}

}  // namespace

std::string to_string(TaskKind k) {
  switch (k) {
    case TaskKind::simulate: return "simulate";
    case TaskKind::stability: return "stability";
    case TaskKind::contraction: return "contraction";
    case TaskKind::invariant: return "invariant";
    case TaskKind::check: return "check";
  }
  return "?";
}

TaskKind parse_task(const std::string& name) {
  for (TaskKind k : {TaskKind::simulate, TaskKind::stability, TaskKind::contraction, TaskKind::invariant,
                     TaskKind::check})
    if (to_string(k) == name) return k;
  throw ConfigError("unknown task '" + name + "'");
}

ExperimentConfig parse_config(const std::string& text, TaskKind task, const ModelRegistry& registry,
                              const Overrides& overrides) {
  boost::property_tree::ptree tree;
  try {
    std::istringstream in(text);
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("config syntax error at line " + std::to_string(e.line()) + ": " + e.message());
  }
  Keys keys(tree);
  ExperimentConfig cfg;
  cfg.task = task;
  if (const auto t = keys.take("task.type"); t && *t != to_string(task))
    throw ConfigError("key 'task.type' is '" + *t + "' but the command is '" + to_string(task) + "'");

  parse_model(keys, cfg, registry);
  parse_sim(keys, cfg, registry, overrides);
  parse_init(keys, cfg);
  switch (task) {
    case TaskKind::simulate:
      break;
    case TaskKind::stability:
      parse_design(keys, cfg);
      parse_stability(keys, cfg);
      break;
    case TaskKind::contraction:
      cfg.contraction.displacement = keys.number("task.displacement", 0.5);
      break;
    case TaskKind::invariant:
      parse_invariant(keys, cfg);
      break;
    case TaskKind::check:
      parse_design(keys, cfg);
      parse_check(keys, cfg);
      break;
  }
  cfg.output_dir = keys.text("output.dir", "out");
  if (const char* env = std::getenv("OUTPUT_DIR"); env && *env) cfg.output_dir = env;
  if (overrides.output_dir) cfg.output_dir = *overrides.output_dir;
  keys.reject_leftovers(" (not used by task " + to_string(task) + ")");
  return cfg;
}

ExperimentConfig load_config(const std::string& path, TaskKind task, const ModelRegistry& registry,
                             const Overrides& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), task, registry, overrides);
}

std::string ExperimentConfig::to_ini() const {
  std::ostringstream os;
  os << "[task]\ntype = " << to_string(task) << '\n';
  switch (task) {
    case TaskKind::simulate:
      break;
    case TaskKind::stability: {
      const auto& p = stability;
      os << "bundle = " << p.bundle << "\nr = " << format_double(p.r)
         << "\ngamma_claimed = " << format_double(p.gamma_claimed) << "\ngamma = " << format_double(p.gamma)
         << "\nc1 = " << format_double(p.c1) << "\nc2 = " << format_double(p.c2) << "\nc2p = " << format_double(p.c2p)
         << "\nfloor = " << format_double(p.floor) << '\n';
      if (p.window) os << "window = " << format_double(p.window->first) << ',' << format_double(p.window->second) << '\n';
      os << "clouds = " << p.clouds << '\n';
      break;
    }
    case TaskKind::contraction:
      os << "displacement = " << format_double(contraction.displacement) << '\n';
      break;
    case TaskKind::invariant: {
      const auto& p = invariant;
      os << "t_grid = " << join(p.t_grid) << "\ns_grid = " << join(p.s_grid) << "\nbootstrap = " << p.bootstrap
         << "\nstationary = " << (p.stationary ? "true" : "false")
         << "\ncontraction = " << (p.contraction ? "true" : "false")
         << "\ndisplacement = " << format_double(p.displacement) << '\n';
      break;
    }
    case TaskKind::check: {
      os << "assumptions = ";
      for (std::size_t i = 0; i < check.assumptions.size(); ++i)
        os << (i ? "," : "") << mvsde::to_string(check.assumptions[i]);
      os << "\ndecay_k = " << format_double(check.decay_k) << "\ndelta = " << format_double(check.delta) << '\n';
      break;
    }
  }

  os << "\n[model]\nname = " << model.name << '\n';
  for (const auto& [k, v] : model.params) os << k << " = " << format_double(v) << '\n';
  if (model.truncate_at) os << "truncate = " << format_double(*model.truncate_at) << '\n';

  os << "\n[sim]\ndt = " << format_double(sim.dt) << "\nt_end = " << format_double(sim.t_end)
     << "\nn_particles = " << sim.n_particles << "\nseed = " << sim.seed
     << "\ntaming = " << (sim.taming == Taming::tamed ? "tamed" : "none") << "\nrecord_every = " << sim.record_every
     << "\nmoment_orders = " << join(sim.moment_orders) << '\n';

  os << "\n[init]\nkind = " << init.kind << '\n';
  if (init.kind == "gaussian")
    os << "mean = " << format_double(init.mean) << "\nstd = " << format_double(init.std)
       << "\nsymmetric = " << (init.symmetric ? "true" : "false") << '\n';
  if (init.kind == "file") os << "path = " << init.path << '\n';

  if (task == TaskKind::stability || task == TaskKind::check) {
    const auto& d = design;
    const auto& f = d.cloud_family;
    os << "\n[design]\nn_points = " << d.n_points << "\nradius_grid = " << join(d.radius_grid) << "\nseed = " << d.seed
       << "\nr = " << format_double(d.r) << "\ntime_grid = " << join(d.time_grid) << "\ncloud_size = " << f.cloud_size
       << "\ncomponents = " << f.components << "\nmean_lo = " << format_double(f.mean_lo)
       << "\nmean_hi = " << format_double(f.mean_hi) << "\nscale_lo = " << format_double(f.scale_lo)
       << "\nscale_hi = " << format_double(f.scale_hi) << "\nstress_every = " << f.stress_every
       << "\ndilation = " << format_double(f.dilation) << '\n';
  }

  os << "\n[output]\ndir = " << output_dir << '\n';
  return os.str();
}

}  // namespace mvsde::cli
