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

#include "config.hpp"

#include "nvqhe/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace nvqhe::cli {

namespace {

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return out;
}

// Visits every JSON-exposed field as (key, member reference).
template <typename Config, typename Visitor>
void visit_fields(Config& c, Visitor&& v) {
  v("gamma", c.rates.gamma);
  v("k1s", c.rates.k1s);
  v("k0s", c.rates.k0s);
  v("ks0", c.rates.ks0);
  v("ks1", c.rates.ks1);
  v("gamma_sigma", c.rates.gamma_sigma);
  v("k1s_sigma", c.rates.k1s_sigma);
  v("k0s_sigma", c.rates.k0s_sigma);
  v("ks0_sigma", c.rates.ks0_sigma);
  v("ks1_sigma", c.rates.ks1_sigma);
  v("r_khz_per_mw", c.r_khz_per_mw);
  v("r_sigma", c.r_sigma);
  v("rabi_per_sqrt_mw", c.rabi_per_sqrt_mw);
  v("rabi_per_sqrt_mw_sigma", c.rabi_per_sqrt_mw_sigma);
  v("omega_gs_thz", c.omega_gs_thz);
  v("omega10", c.omega10);
  v("rabi", c.rabi);
  v("rabi_sigma", c.rabi_sigma);
  v("duty", c.duty);
  v("gamma_th", c.gamma_th);
  v("pump", c.pump);
  v("detuning", c.detuning);
  v("action", c.action);
  v("mode", c.mode);
  v("fwhm", c.fwhm);
  v("quadrature", c.quadrature);
  v("gauss_hermite_points", c.gauss_hermite_points);
  v("full_optical", c.full_optical);
  v("variant", c.variant);
  v("omega_grid", c.omega_grid);
  v("fig3_actions", c.fig3_actions);
  v("fig4a_actions", c.fig4a_actions);
  v("fig4b_tau_w", c.fig4b_tau_w);
  v("fig4b_total_action", c.fig4b_total_action);
  v("fig4b_tau_th_over_t2", c.fig4b_tau_th_over_t2);
  v("kappa_pumps", c.kappa_pumps);
  v("kappa_schedule", c.kappa_schedule);
  v("kappa_duty", c.kappa_duty);
  v("kappa_tau_cyc", c.kappa_tau_cyc);
  v("kappa_points", c.kappa_points);
  v("kappa_samples", c.kappa_samples);
  v("emulation_pumps", c.emulation_pumps);
  v("emulation_times", c.emulation_times);
  v("emulation_excited", c.emulation_excited);
  v("bath_pumps", c.bath_pumps);
  v("field_grid", c.field_grid);
  v("theta_deg", c.theta_deg);
  v("zfs_mode", c.zfs_mode);
  v("saturation_powers", c.saturation_powers);
  v("saturation_amplitude", c.saturation_amplitude);
  v("calibration_data", c.calibration_data);
  v("n_samples", c.n_samples);
  v("seed", c.seed);
  v("measured_power", c.measured_power);
  v("measured_sigma", c.measured_sigma);
}

}  // namespace

RunConfig::RunConfig()
    : kappa_pumps(linspace(0.25, 1.0, 16)),
      emulation_pumps(linspace(0.0, 1.0, 21)),
      emulation_times(linspace(0.0, 10.0, 201)),
      bath_pumps(linspace(0.1, 1.0, 19)),
      field_grid(linspace(0.0, 0.2, 161)),
      saturation_powers(linspace(0.25, 4.0, 16)) {}

void RunConfig::validate() const {
  try {
    rates.validate();
    (void)engine_mode();
    (void)distribution();
    (void)thermal_model();
    (void)spin(0.0);
    (void)schedule();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  if (!(duty > 0.0 && duty < 1.0)) throw UsageError("duty must lie in (0, 1)");
  if (!(kappa_duty > 0.0 && kappa_duty < 1.0)) throw UsageError("kappa_duty must lie in (0, 1)");
  if (!(omega10 > 0.0)) throw UsageError("omega10 must be positive");
  if (!(fwhm >= 0.0)) throw UsageError("fwhm must be non-negative");
  if (kappa_points < 8) throw UsageError("kappa_points must be at least 8");
  if (n_samples < 100) throw UsageError("n_samples must be at least 100");
  if (kappa_samples != 0 && kappa_samples < 100) {
    throw UsageError("kappa_samples must be 0 or at least 100");
  }
  for (const auto* grid : {&omega_grid, &fig3_actions, &fig4a_actions, &fig4b_tau_th_over_t2,
                           &kappa_pumps, &emulation_pumps, &emulation_times, &bath_pumps,
                           &field_grid, &saturation_powers}) {
    if (grid->empty()) throw UsageError("grids must not be empty");
    for (double x : *grid) {
      if (!std::isfinite(x) || x < 0.0) throw UsageError("grid values must be finite and >= 0");
    }
  }
}

engine::ThermalModel RunConfig::thermal_model() const {
  engine::ThermalModel m;
  m.rates = rates;
  m.full_optical = full_optical;
  if (variant == "corrected") {
    m.variant = thermal::Variant::corrected;
  } else if (variant == "raw") {
    m.variant = thermal::Variant::raw;
  } else {
    throw UsageError("variant must be 'corrected' or 'raw'");
  }
  return m;
}

engine::DetuningDistribution RunConfig::distribution() const {
  engine::DetuningDistribution d;
  d.fwhm = fwhm;
  d.gauss_hermite_points = gauss_hermite_points;
  if (quadrature == "adaptive") {
    d.quadrature = engine::QuadratureKind::adaptive;
  } else if (quadrature == "gauss_hermite") {
    d.quadrature = engine::QuadratureKind::gauss_hermite;
  } else {
    throw UsageError("quadrature must be 'adaptive' or 'gauss_hermite'");
  }
  return d;
}

engine::EngineLevels RunConfig::levels() const {
  engine::EngineLevels l;
  l.omega10 = omega10;
  return l;
}

engine::Mode RunConfig::engine_mode() const {
  try {
    return engine::mode_from_string(mode);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

nv::SpinParams RunConfig::spin(double field_tesla) const {
  nv::SpinParams sp;
  sp.field = field_tesla;
  sp.theta_deg = theta_deg;
  if (zfs_mode == "physical") {
    sp.zfs_mode = nv::ZfsMode::physical;
  } else if (zfs_mode == "table_s2") {
    sp.zfs_mode = nv::ZfsMode::table_s2;
  } else {
    throw UsageError("zfs_mode must be 'physical' or 'table_s2'");
  }
  return sp;
}

uncertainty::ParameterPriors RunConfig::priors() const {
  uncertainty::ParameterPriors p;
  p.rates = rates;
  p.r_khz_per_mw = r_khz_per_mw;
  p.r_sigma = r_sigma;
  p.rabi_per_sqrt_mw = rabi_per_sqrt_mw;
  p.rabi_sigma = rabi_per_sqrt_mw_sigma;
  p.fwhm = fwhm;
  return p;
}

fluorescence::Schedule RunConfig::schedule() const {
  if (kappa_schedule == "two_stroke") return fluorescence::Schedule::two_stroke;
  if (kappa_schedule == "continuous") return fluorescence::Schedule::continuous;
  throw UsageError("kappa_schedule must be 'two_stroke' or 'continuous'");
}

nlohmann::json to_json(const RunConfig& cfg) {
  nlohmann::json j = nlohmann::json::object();
  visit_fields(cfg, [&](const char* key, const auto& value) { j[key] = value; });
  return j;
}

void apply_json(RunConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) throw UsageError("config: top level must be a JSON object");
  std::size_t matched = 0;
  visit_fields(cfg, [&](const char* key, auto& value) {
    const auto it = j.find(key);
    if (it == j.end()) return;
    ++matched;
    try {
      it->get_to(value);
    } catch (const nlohmann::json::exception& e) {
      throw UsageError(std::string("config: bad value for '") + key + "': " + e.what());
    }
  });
  if (matched != j.size()) {
    const nlohmann::json known = to_json(cfg);
    for (const auto& [key, _] : j.items()) {
      if (!known.contains(key)) throw UsageError("config: unknown key '" + key + "'");
    }
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path);
  RunConfig cfg;
  try {
    apply_json(cfg, nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError("config " + path + ": " + e.what());
  }
  return cfg;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first == std::string::npos) throw UsageError("empty entry in grid '" + text + "'");
    const std::string token = item.substr(first, last - first + 1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(value)) {
      throw UsageError("invalid number '" + token + "' in grid '" + text + "'");
    }
    out.push_back(value);
  }
  if (out.empty()) throw UsageError("empty grid");
  return out;
}

}  // namespace nvqhe::cli
