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

#include <filesystem>
#include <iosfwd>
#include <string>

#include "mvsde/measure.hpp"

namespace mvsde {

/// Formats a double with 17 significant digits ("%.17g"): round-trips exactly.
std::string format_double(double v);

/// One point per row, d comma-separated columns, no header, '\n' line ends.
std::string to_csv(const EmpiricalMeasure& mu);
void write_csv(std::ostream& os, const EmpiricalMeasure& mu);
void write_csv(const std::filesystem::path& path, const EmpiricalMeasure& mu);

/// Throws ParseError on malformed rows or ragged column counts.
EmpiricalMeasure measure_from_csv(const std::string& text);
EmpiricalMeasure read_csv(const std::filesystem::path& path);

/// JSON array of arrays, e.g. [[0.5],[1.25]].
std::string to_json(const EmpiricalMeasure& mu);
EmpiricalMeasure measure_from_json(const std::string& text);

}  // namespace mvsde
