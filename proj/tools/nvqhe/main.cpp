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

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "nvqhe/errors.hpp"
#include "output.hpp"

namespace {

using nvqhe::cli::RunConfig;
using nvqhe::cli::UsageError;

constexpr int kExitOk = 0;
constexpr int kExitCompute = 1;
constexpr int kExitUsage = 2;

struct Overrides {
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<std::uint64_t> seed;
  std::optional<double> rabi, pump, gamma_th, duty, fwhm, detuning, action, tau_cyc;
  std::optional<std::string> mode, quadrature, schedule, data, omega_grid, actions, pumps;
  std::optional<std::size_t> samples;
  std::optional<double> measured, measured_sigma;
  bool full_optical = false;
};

void apply(const Overrides& o, RunConfig& cfg) {
  if (o.format) {
    if (*o.format == "csv") {
      cfg.format = nvqhe::cli::Format::csv;
    } else if (*o.format == "json") {
      cfg.format = nvqhe::cli::Format::json;
    } else {
      throw UsageError("--format must be csv or json");
    }
  }
  if (o.seed) cfg.seed = *o.seed;
  if (o.rabi) cfg.rabi = *o.rabi;
  if (o.pump) cfg.pump = *o.pump;
  if (o.gamma_th) cfg.gamma_th = *o.gamma_th;
  if (o.duty) cfg.duty = cfg.kappa_duty = *o.duty;
  if (o.fwhm) cfg.fwhm = *o.fwhm;
  if (o.detuning) cfg.detuning = *o.detuning;
  if (o.action) cfg.action = *o.action;
  if (o.tau_cyc) cfg.kappa_tau_cyc = *o.tau_cyc;
  if (o.mode) cfg.mode = *o.mode;
  if (o.quadrature) cfg.quadrature = *o.quadrature;
  if (o.schedule) cfg.kappa_schedule = *o.schedule;
  if (o.data) cfg.calibration_data = *o.data;
  if (o.omega_grid) cfg.omega_grid = nvqhe::cli::parse_grid(*o.omega_grid);
  if (o.actions) {
    const auto grid = nvqhe::cli::parse_grid(*o.actions);
    cfg.fig3_actions = cfg.fig4a_actions = grid;
  }
  if (o.pumps) cfg.kappa_pumps = cfg.bath_pumps = nvqhe::cli::parse_grid(*o.pumps);
  if (o.samples) cfg.n_samples = *o.samples;
  if (o.measured) cfg.measured_power = *o.measured;
  if (o.measured_sigma) cfg.measured_sigma = *o.measured_sigma;
  if (o.full_optical) cfg.full_optical = true;
}

std::filesystem::path output_dir(const Overrides& o) {
  if (o.out) return *o.out;
  if (const char* env = std::getenv("NVQHE_OUT_DIR"); env != nullptr && *env != '\0') return env;
  return ".";
}

void print_tables(const nvqhe::cli::Report& report) {
  for (const auto& t : report.tables) {
    if (t.rows.size() > 40) continue;
    std::cout << t.name << '\n';
    nvqhe::cli::write_table(std::cout, t, nlohmann::json(), nvqhe::cli::Format::csv);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator of NV-centre quantum heat engines"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::string> config_path;
  Overrides o;
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--out", o.out, "Output directory (default: $NVQHE_OUT_DIR or .)");
  app.add_option("--format", o.format, "csv or json");
  app.add_option("--seed", o.seed, "Random seed");
  app.add_option("--rabi", o.rabi, "Peak Rabi frequency, Mrad/s");
  app.add_option("--pump", o.pump, "Optical excitation rate Gamma, MHz");
  app.add_option("--gamma-th", o.gamma_th, "Thermal coupling for the action axis, MHz");
  app.add_option("--duty", o.duty, "Duty cycle");
  app.add_option("--fwhm", o.fwhm, "Detuning distribution FWHM, Mrad/s");
  app.add_option("--detuning", o.detuning, "Centre detuning, Mrad/s");
  app.add_option("--action", o.action, "Action per cycle, hbar");
  app.add_option("--tau-cyc", o.tau_cyc, "Cycle time for kappa, us");
  app.add_option("--mode", o.mode, "two_stroke, continuous or dephased_two_stroke");
  app.add_option("--quadrature", o.quadrature, "adaptive or gauss_hermite");
  app.add_option("--schedule", o.schedule, "kappa schedule: two_stroke or continuous");
  app.add_option("--omega-grid", o.omega_grid, "Comma-separated Rabi frequencies");
  app.add_option("--actions", o.actions, "Comma-separated actions");
  app.add_option("--pumps", o.pumps, "Comma-separated Gamma values");
  app.add_option("--samples", o.samples, "Monte-Carlo samples");
  app.add_flag("--full-optical", o.full_optical, "Use the full seven-level thermal stroke");

  std::string figure;
  auto* reproduce = app.add_subcommand("reproduce", "Write the data behind a figure");
  reproduce->add_option("figure", figure, "fig3|fig4a|fig4b|s5|s11|s13|s15|s16")->required();
  reproduce->add_option("--data", o.data, "Saturation CSV (power_mW,fluorescence_counts)");

  auto* engine = app.add_subcommand("engine", "Engine power at one or more actions");
  auto* kappa = app.add_subcommand("kappa", "Fluorescence-to-power factor kappa(Gamma)");
  auto* calibrate = app.add_subcommand("calibrate", "Fit Gamma = r P to saturation data");
  calibrate->add_option("--data", o.data, "Saturation CSV (power_mW,fluorescence_counts)")
      ->required();
  auto* uncertainty = app.add_subcommand("uncertainty", "Monte-Carlo errors and bound test");
  uncertainty->add_option("--measured", o.measured, "Measured power");
  uncertainty->add_option("--measured-sigma", o.measured_sigma, "1-sigma of measured power");
  bool json_out = false;
  auto* selftest = app.add_subcommand("selftest", "Compare against printed golden values");
  selftest->add_flag("--json", json_out, "Machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    RunConfig cfg = config_path ? nvqhe::cli::load_config(*config_path) : RunConfig{};
    apply(o, cfg);
    cfg.validate();
    const auto dir = output_dir(o);
    cfg.out_dir = dir.string();

    nvqhe::cli::Report report;
    std::string title;
    if (*reproduce) {
      report = nvqhe::cli::reproduce(figure, cfg);
      title = figure;
    } else if (*engine) {
      const std::vector<double> actions =
          o.actions ? nvqhe::cli::parse_grid(*o.actions) : std::vector<double>{cfg.action};
      report = nvqhe::cli::engine_table(cfg, actions);
      title = "engine";
    } else if (*kappa) {
      report = nvqhe::cli::kappa_table(cfg);
      title = "kappa";
    } else if (*calibrate) {
      report = nvqhe::cli::calibrate(cfg);
      title = "calibrate";
    } else if (*uncertainty) {
      report = nvqhe::cli::uncertainty_report(cfg);
      title = "uncertainty";
    } else if (*selftest) {
      report = nvqhe::cli::selftest(cfg);
      if (json_out) {
        nlohmann::json j{{"passed", report.passed()},
                         {"checks", nvqhe::cli::checks_json(report.checks)}};
        std::cout << j.dump(2) << '\n';
      } else {
        nvqhe::cli::print_checks(std::cout, "selftest", report.checks);
      }
      return report.passed() ? kExitOk : kExitCompute;
    }

    for (const auto& path : nvqhe::cli::write_report(report, cfg, dir)) {
      std::cout << "wrote " << path.string() << '\n';
    }
    print_tables(report);
    if (!report.checks.empty()) nvqhe::cli::print_checks(std::cout, title, report.checks);
    return kExitOk;
  } catch (const UsageError& e) {
    std::cerr << "nvqhe: " << e.what() << '\n';
    return kExitUsage;
  } catch (const nvqhe::Error& e) {
    std::cerr << "nvqhe: " << e.what() << '\n';
    return kExitCompute;
  } catch (const std::exception& e) {
    std::cerr << "nvqhe: " << e.what() << '\n';
    return kExitCompute;
  }
}
