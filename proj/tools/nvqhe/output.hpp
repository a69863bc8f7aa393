// Copyright 2026 The nvqhe Authors
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

// Tabular outputs and pass/fail summaries.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "config.hpp"
#include "json.hpp"

namespace nvqhe::cli {

using Cell = std::variant<double, std::string>;

struct Table {
  std::string name;  // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

/// Nine significant digits, scientific notation.
std::string format_number(double x);

/// CSV: a "# config" comment line with the resolved config (omitted when
/// \`config\` is null), then header and rows. JSON: {"config", "columns", "rows"}.
void write_table(std::ostream& out, const Table& table, const nlohmann::json& config,
                 Format format);

/// Writes <dir>/<name>.<csv|json>, creating `dir` if needed.
std::filesystem::path write_table_file(const std::filesystem::path& dir, const Table& table,
                                       const nlohmann::json& config, Format format);

struct Check {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  std::string relation;  // how value compares to limit, e.g. "<="
  bool passed = false;
};

void print_checks(std::ostream& out, const std::string& title, const std::vector<Check>& checks);
nlohmann::json checks_json(const std::vector<Check>& checks);

}  // namespace nvqhe::cli
