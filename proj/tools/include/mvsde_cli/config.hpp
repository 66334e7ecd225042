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
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mvsde/conditions.hpp"
#include "mvsde/simulate.hpp"
#include "mvsde_cli/registry.hpp"

namespace mvsde::cli {

enum class TaskKind { simulate, stability, contraction, invariant, check };

std::string to_string(TaskKind k);
/// Throws ConfigError.
TaskKind parse_task(const std::string& name);

/// Malformed, missing or unknown configuration. The message names the key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ModelSpec {
  std::string name;
  std::map<std::string, double> params;
  std::optional<double> truncate_at;
};

struct InitSpec {
  /// dirac | gaussian | file
  std::string kind = "gaussian";
  double mean = 0.0;
  double std = 1.0;
  bool symmetric = false;
  std::string path;
};

struct StabilityParams {
  std::string bundle;
  double r = 4.0;
  double gamma_claimed = 0.0;
  double gamma = 0.0;
  double c1 = 1.0;
  double c2 = 1.0;
  double c2p = 0.0;
  double floor = 0.0;
  std::optional<std::pair<double, double>> window;
  std::size_t clouds = 64;
};

struct ContractionParams {
  double displacement = 0.5;
};

struct InvariantParams {
  std::vector<double> t_grid;
  std::vector<double> s_grid;
  std::size_t bootstrap = 200;
  bool stationary = true;
  bool contraction = true;
  double displacement = 0.5;
};

struct CheckParams {
  std::vector<Assumption> assumptions;
  double decay_k = 1.0;
  double delta = 1.0;
};

/// Fully resolved experiment: every default filled in.
struct ExperimentConfig {
  TaskKind task = TaskKind::simulate;
  ModelSpec model;
  SimConfig sim;
  InitSpec init;
  StabilityParams stability;
  ContractionParams contraction;
  InvariantParams invariant;
  CheckParams check;
  SampleDesign design;
  std::string output_dir = "out";

  /// The resolved configuration in the input grammar; parsing it back yields
  /// an identical configuration.
  std::string to_ini() const;
};

/// Command-line values that take precedence over the file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output_dir;
};

/// Parses INI text for `task`. Output directory precedence: overrides, then
/// the OUTPUT_DIR environment variable, then [output] dir, then "out".
ExperimentConfig parse_config(const std::string& text, TaskKind task, const ModelRegistry& registry,
                              const Overrides& overrides = {});

ExperimentConfig load_config(const std::string& path, TaskKind task, const ModelRegistry& registry,
                             const Overrides& overrides = {});

}  // namespace mvsde::cli
