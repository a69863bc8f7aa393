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

#include "output.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

namespace nvqhe::cli {

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw std::logic_error("Table::add: row width does not match the header");
  }
  rows.push_back(std::move(row));
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.8e", x);
  return buf;
}

void write_table(std::ostream& out, const Table& table, const nlohmann::json& config,
                 Format format) {
  if (format == Format::json) {
    nlohmann::ordered_json j;
    j["name"] = table.name;
    j["config"] = config;
    j["columns"] = table.columns;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
      nlohmann::ordered_json r;
      for (std::size_t i = 0; i < row.size(); ++i) {
        std::visit([&](const auto& v) { r[table.columns[i]] = v; }, row[i]);
      }
      j["rows"].push_back(std::move(r));
    }
    out << j.dump(2) << '\n';
    return;
  }
  if (!config.is_null()) out << "# config " << config.dump() << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << table.columns[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      if (const auto* d = std::get_if<double>(&row[i])) {
        out << format_number(*d);
      } else {
        out << std::get<std::string>(row[i]);
      }
    }
    out << '\n';
  }
}

std::filesystem::path write_table_file(const std::filesystem::path& dir, const Table& table,
                                       const nlohmann::json& config, Format format) {
  std::filesystem::create_directories(dir);
  const auto path = dir / (table.name + (format == Format::json ? ".json" : ".csv"));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_table(out, table, config, format);
  if (!out) throw std::runtime_error("write failed for " + path.string());
  return path;
}

void print_checks(std::ostream& out, const std::string& title, const std::vector<Check>& checks) {
  out << title << '\n';
  for (const auto& c : checks) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "  [%s] %-40s %.6g %s %.6g\n", c.passed ? "PASS" : "FAIL",
                  c.name.c_str(), c.value, c.relation.c_str(), c.limit);
    out << buf;
  }
}

nlohmann::json checks_json(const std::vector<Check>& checks) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& c : checks) {
    j.push_back({{"name", c.name},
                 {"value", c.value},
                 {"limit", c.limit},
                 {"relation", c.relation},
                 {"passed", c.passed}});
  }
  return j;
}

}  // namespace nvqhe::cli
