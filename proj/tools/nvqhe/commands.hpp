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

// Subcommand implementations. Each figure producer returns its tables and
// the checks that go into the summary; the caller decides where to write.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "config.hpp"
#include "output.hpp"

namespace nvqhe::cli {

struct Report {
  std::vector<Table> tables;
  std::vector<Check> checks;

  [[nodiscard]] bool passed() const;
};

const std::vector<std::string>& figure_ids();

Report reproduce_fig3(const RunConfig& cfg);
Report reproduce_fig4a(const RunConfig& cfg);
Report reproduce_fig4b(const RunConfig& cfg);
Report reproduce_s5(const RunConfig& cfg);
Report reproduce_s11(const RunConfig& cfg);
Report reproduce_s13(const RunConfig& cfg);
Report reproduce_s15(const RunConfig& cfg);
Report reproduce_s16(const RunConfig& cfg);

/// Dispatches on the figure id. Throws UsageError for unknown ids.
Report reproduce(std::string_view figure, const RunConfig& cfg);

/// Engine power at every action in `actions` for the configured mode.
Report engine_table(const RunConfig& cfg, const std::vector<double>& actions);
Report kappa_table(const RunConfig& cfg);
/// Requires cfg.calibration_data.
Report calibrate(const RunConfig& cfg);
Report uncertainty_report(const RunConfig& cfg);
/// Published golden values, computed from cfg.rates.
Report selftest(const RunConfig& cfg);

/// Writes every table of `report` into `dir` and returns the paths.
std::vector<std::filesystem::path> write_report(const Report& report, const RunConfig& cfg,
                                                const std::filesystem::path& dir);

}  // namespace nvqhe::cli
