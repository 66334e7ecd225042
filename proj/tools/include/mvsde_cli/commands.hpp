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

#include <iosfwd>
#include <string>

#include "mvsde_cli/config.hpp"
#include "mvsde_cli/registry.hpp"

namespace mvsde::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Runs the configured task, writing outputs into cfg.output_dir. Returns the
/// process exit code; diagnostics go to `err`, summaries to `out`.
int run_task(const ExperimentConfig& cfg, const ModelRegistry& registry, std::ostream& out, std::ostream& err);

/// Lists models and Lyapunov bundles.
void list_presets(const ModelRegistry& registry, std::ostream& out);

}  // namespace mvsde::cli
