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
#include "mvsde_cli/registry.hpp"

#include "mvsde/error.hpp"

namespace mvsde::cli {

ModelRegistry::ModelRegistry() {
  add({"mean_field_ou", "b = -alpha x - E[X], sigma = 1", 1, {{"alpha", 1.0}},
       [](const std::map<std::string, double>& p) { return preset_mean_field_ou(p.at("alpha")); }});
  add({"cubic", "b = -x^3 - x E[(L v |X|) ^ M], sigma = x/2 (tamed)", 1, {{"L", 1.0}, {"M", 2.0}},
       [](const std::map<std::string, double>& p) { return preset_cubic(p.at("L"), p.at("M")); }});
  add({"landau_linear", "b = -2 (x + alpha E[X]), sigma = x + alpha E[X]", 1, {{"alpha", 0.25}},
       [](const std::map<std::string, double>& p) { return preset_landau_linear(p.at("alpha")); }});
}

void ModelRegistry::add(ModelEntry entry) {
  if (entry.name.empty() || !entry.make) throw InvalidArgument("model entry needs a name and a factory");
  const std::string name = entry.name;
  if (!entries_.emplace(name, std::move(entry)).second)
    throw InvalidArgument("model '" + name + "' is already registered");
}

const ModelEntry& ModelRegistry::at(const std::string& name) const {
  const auto it = entries_.find(name);
  if (it == entries_.end()) throw InvalidArgument("unknown model '" + name + "'");
  return it->second;
}

std::vector<std::string> ModelRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, entry] : entries_) out.push_back(name);
  return out;
}

ModelEntry explosive_cubic_entry() {
  return {"explosive_cubic", "b = x^3, sigma = 1 (negative control)", 1, {},
          [](const std::map<std::string, double>&) {
            return CoefficientPair::from_pointwise(
                1,
                [](double, std::span<const double> x, const EmpiricalMeasure&, std::span<double> out) {
                  out[0] = x[0] * x[0] * x[0];
                },
                [](double, std::span<const double>, const EmpiricalMeasure&, std::span<double> out) { out[0] = 1.0; },
                "explosive_cubic");
          }};
}

}  // namespace mvsde::cli
