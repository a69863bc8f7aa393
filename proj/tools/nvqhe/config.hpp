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

// Run configuration: built-in defaults, overridden by a JSON file, overridden
// by command-line flags.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "nvqhe/engine.hpp"
#include "nvqhe/fluorescence.hpp"
#include "nvqhe/nv_model.hpp"
#include "nvqhe/uncertainty.hpp"

namespace nvqhe::cli {

/// Malformed input from the user; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Format { csv, json };

struct RunConfig {
  // Rate constants (MHz) and their 1-sigma errors.
  nv::RateConstants rates;

  // Calibration.
  double r_khz_per_mw = 436.0;
  double r_sigma = 25.0;
  double rabi_per_sqrt_mw = nv::kTwoPi * 0.244;
  double rabi_per_sqrt_mw_sigma = nv::kTwoPi * 0.002;
  double omega_gs_thz = 89.0;

  // Engine.
  double omega10 = nv::kTwoPi * 2600.0;
  double rabi = 1.6;
  double rabi_sigma = 0.05;
  double duty = 1.0 / 3.0;
  double gamma_th = 0.41;
  double pump = 0.76;
  double detuning = 0.0;
  double action = 0.05;
  std::string mode = "two_stroke";
  double fwhm = nv::kTwoPi * 7.0;
  std::string quadrature = "adaptive";
  std::size_t gauss_hermite_points = 41;
  bool full_optical = false;
  std::string variant = "corrected";

  std::vector<double> omega_grid = {0.8, 1.6, 3.2};
  std::vector<double> fig3_actions = {0.2, 0.15, 0.1, 0.07, 0.05, 0.03, 0.02};
  std::vector<double> fig4a_actions = {0.4, 0.3, 0.2, 0.15, 0.1, 0.075, 0.05};

  double fig4b_tau_w = 0.01;
  double fig4b_total_action = 0.05;
  std::vector<double> fig4b_tau_th_over_t2 = {0.25, 0.5, 0.75, 1.0, 1.25,
                                              1.5,  1.75, 2.0, 2.25};

  // Fluorescence.
  std::vector<double> kappa_pumps;
  std::string kappa_schedule = "two_stroke";
  double kappa_duty = 1.0 / 3.0;
  double kappa_tau_cyc = 0.06;
  std::size_t kappa_points = 256;
  std::size_t kappa_samples = 128;

  // Thermal emulation.
  std::vector<double> emulation_pumps;
  std::vector<double> emulation_times;
  double emulation_excited = 0.005;
  std::vector<double> bath_pumps;

  // Field dependence.
  std::vector<double> field_grid;
  double theta_deg = 0.6;
  std::string zfs_mode = "physical";

  // Saturation calibration.
  std::vector<double> saturation_powers;
  double saturation_amplitude = 1.0e5;
  std::string calibration_data;

  // Statistics.
  std::size_t n_samples = 4096;
  std::uint64_t seed = 1;
  double measured_power = 0.0;
  double measured_sigma = 0.0;

  // Output.
  Format format = Format::csv;
  std::string out_dir;

  RunConfig();

  /// Throws UsageError on inconsistent values.
  void validate() const;

  [[nodiscard]] engine::ThermalModel thermal_model() const;
  [[nodiscard]] engine::DetuningDistribution distribution() const;
  [[nodiscard]] engine::EngineLevels levels() const;
  [[nodiscard]] engine::Mode engine_mode() const;
  [[nodiscard]] nv::SpinParams spin(double field_tesla) const;
  [[nodiscard]] uncertainty::ParameterPriors priors() const;
  [[nodiscard]] fluorescence::Schedule schedule() const;
};

nlohmann::json to_json(const RunConfig& cfg);

/// Applies every key of `j` onto `cfg`. Unknown keys and type mismatches
/// throw UsageError.
void apply_json(RunConfig& cfg, const nlohmann::json& j);

RunConfig load_config(const std::string& path);

/// Comma-separated list of numbers. Throws UsageError.
std::vector<double> parse_grid(const std::string& text);

}  // namespace nvqhe::cli
