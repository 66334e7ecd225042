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
#include "mvsde/measure_io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mvsde/error.hpp"

namespace mvsde {
namespace {

double parse_double(const std::string& field, std::size_t line) {
  const char* begin = field.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
  if (end == begin || *end != '\0' || errno == ERANGE)
    throw ParseError("line " + std::to_string(line) + ": cannot parse '" + field + "' as a number");
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& os, const EmpiricalMeasure& mu) {
  const std::size_t d = mu.dim();
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const auto p = mu.point(i);
    for (std::size_t k = 0; k < d; ++k) {
      if (k) os << ',';
      os << format_double(p[k]);
    }
    os << '\n';
  }
}

std::string to_csv(const EmpiricalMeasure& mu) {
  std::ostringstream os;
  write_csv(os, mu);
  return os.str();
}

void write_csv(const std::filesystem::path& path, const EmpiricalMeasure& mu) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  write_csv(os, mu);
}

EmpiricalMeasure measure_from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::vector<double> flat;
  std::size_t dim = 0;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t cols = 0;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      flat.push_back(parse_double(line.substr(start, comma - start), lineno));
      ++cols;
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (dim == 0) dim = cols;
    else if (cols != dim)
      throw ParseError("line " + std::to_string(lineno) + ": expected " + std::to_string(dim) + " columns");
  }
  if (dim == 0) throw ParseError("CSV cloud is empty");
  return {std::move(flat), dim};
}

EmpiricalMeasure read_csv(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return measure_from_csv(ss.str());
}

std::string to_json(const EmpiricalMeasure& mu) {
  nlohmann::json arr = nlohmann::json::array();
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const auto p = mu.point(i);
    arr.push_back(std::vector<double>(p.begin(), p.end()));
  }
  return arr.dump();
}

EmpiricalMeasure measure_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON cloud: ") + e.what());
  }
  if (!j.is_array()) throw ParseError("JSON cloud must be an array of arrays");
  std::vector<std::vector<double>> rows;
  for (const auto& row : j) {
    if (!row.is_array()) throw ParseError("JSON cloud rows must be arrays");
    std::vector<double> r;
    for (const auto& v : row) {
      if (!v.is_number()) throw ParseError("JSON cloud entries must be numbers");
      r.push_back(v.get<double>());
    }
    rows.push_back(std::move(r));
  }
  try {
    return EmpiricalMeasure::from_rows(rows);
  } catch (const DimensionMismatch& e) {
    throw ParseError(e.what());
  }
}

}  // namespace mvsde
