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
#include <span>
#include <vector>

namespace mvsde {

/// Minimum-cost perfect assignment on a dense n x n row-major cost matrix
/// (shortest augmenting paths with potentials, O(n^3)). Returns the column
/// assigned to each row. Deterministic: ties resolve to the lowest index.
std::vector<std::size_t> solve_assignment(std::span<const double> cost, std::size_t n);

}  // namespace mvsde
