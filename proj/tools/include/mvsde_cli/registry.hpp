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
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mvsde/model.hpp"

namespace mvsde::cli {

/// A model the CLI can instantiate by name, with its numeric parameters and
/// their defaults.
struct ModelEntry {
  std::string name;
  std::string description;
  std::size_t dim = 1;
  std::map<std::string, double> defaults;
  std::function<CoefficientPair(const std::map<std::string, double>& params)> make;
};

/// Built-in presets plus any coefficients registered at start-up.
class ModelRegistry {
 public:
  /// Registry pre-filled with mean_field_ou, cubic and landau_linear.
  ModelRegistry();

  /// Throws InvalidArgument if the name is taken.
  void add(ModelEntry entry);
  /// Throws InvalidArgument for an unknown name.
  const ModelEntry& at(const std::string& name) const;
  bool contains(const std::string& name) const { return entries_.count(name) > 0; }
  std::vector<std::string> names() const;

 private:
  std::map<std::string, ModelEntry> entries_;
};

/// b(x) = x^3, sigma = 1: the explosive negative control for the growth check.
ModelEntry explosive_cubic_entry();

}  // namespace mvsde::cli
