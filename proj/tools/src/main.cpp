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
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mvsde/parallel.hpp"
#include "mvsde_cli/commands.hpp"
#include "mvsde_cli/config.hpp"
#include "mvsde_cli/registry.hpp"

int main(int argc, char** argv) {
  using namespace mvsde::cli;

  ModelRegistry registry;
  registry.add(explosive_cubic_entry());

  CLI::App app{"Particle simulation and verification toolkit for distribution-dependent SDEs"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::optional<std::string> output;

  for (const char* name : {"simulate", "stability", "contraction", "invariant", "check"}) {
    auto* sub = app.add_subcommand(name, std::string("run the ") + name + " task");
    sub->add_option("--config", config_path, "experiment config (INI)")->required();
    sub->add_option("--seed", seed, "override sim.seed");
    sub->add_option("--threads", threads, "worker threads (results do not depend on it)")->check(CLI::PositiveNumber);
    sub->add_option("--output", output, "output directory");
  }
  app.add_subcommand("presets", "list models and Lyapunov bundles");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  CLI::App* sub = app.get_subcommands().front();
  if (sub->get_name() == "presets") {
    list_presets(registry, std::cout);
    return kExitOk;
  }
  if (threads > 0) mvsde::set_num_threads(threads);

  ExperimentConfig cfg;
  try {
    cfg = load_config(config_path, parse_task(sub->get_name()), registry, Overrides{seed, output});
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  return run_task(cfg, registry, std::cout, std::cerr);
}
