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

// Liouville-space two-stroke and continuous heat engines on the NV ground
// state.
//
// State layout: {rho01, rho10, rho00, rho11, <other populations>}. The
// population block is ordered {G0, G+1, G-1, S} in the reduced model and
// {G0, G+1, G-1, S, E0, E+1, E-1} in the full optical model, so |0> = G0 and
// |1> = G+1 in both. Energies are in hbar * Mrad/s, power in hbar * Mrad/s/us.

#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "nvqhe/numerics.hpp"
#include "nvqhe/nv_model.hpp"
#include "nvqhe/quadrature.hpp"
#include "nvqhe/thermal_emulation.hpp"

namespace nvqhe::engine {

namespace idx {
inline constexpr Eigen::Index r01 = 0;
inline constexpr Eigen::Index r10 = 1;
inline constexpr Eigen::Index r00 = 2;
inline constexpr Eigen::Index r11 = 3;
inline constexpr Eigen::Index first_population = 2;
}  // namespace idx

struct EngineLevels {
  double omega10 = nv::kTwoPi * 2600.0;  // Mrad/s
  double omega12 = 0.0;                  // carried for completeness; never enters outputs
};

enum class Mode { two_stroke, continuous, dephased_two_stroke };

std::string_view to_string(Mode m);
Mode mode_from_string(std::string_view s);

struct CycleConfig {
  double rabi = 1.6;       // peak Rabi frequency, Mrad/s
  double detuning = 0.0;   // Mrad/s
  double tau_cyc = 0.06;   // us
  double duty = 1.0 / 3.0; // tau_w / tau_cyc
  double pump = 0.76;      // Gamma during the thermal stroke, MHz
  Mode mode = Mode::two_stroke;

  [[nodiscard]] double tau_w() const { return duty * tau_cyc; }
  [[nodiscard]] double tau_th() const { return (1.0 - duty) * tau_cyc; }

  /// Throws DomainError for negative durations or duty outside (0, 1).
  void validate() const;

  static CycleConfig from_strokes(double tau_w, double tau_th, double rabi, double pump,
                                  Mode mode = Mode::two_stroke);
  /// Cycle time chosen so that (rabi d + gamma_th (1 - d)) tau_cyc = action.
  static CycleConfig from_action(double action, double rabi, double duty, double gamma_th,
                                 double pump, Mode mode = Mode::two_stroke);
};

enum class QuadratureKind { adaptive, gauss_hermite };

struct DetuningDistribution {
  double fwhm = nv::kTwoPi * 7.0;  // Mrad/s
  QuadratureKind quadrature = QuadratureKind::adaptive;
  std::size_t gauss_hermite_points = 41;
  quadrature::AdaptiveOptions adaptive = {1e-12, 1e-9, 8.0, 20000};

  /// 1/e decay time of the ensemble coherence, 4 sqrt(ln 2) / fwhm.
  [[nodiscard]] double t2_star() const;
  static DetuningDistribution from_t2_star(double t2_star_us);
};

/// Population block of the thermal stroke in engine order.
RMatrix population_block(const RMatrix& L_reduced);
/// Full optical generator in engine order (7 populations).
RMatrix population_block_full(const RMatrix& M);

/// Supplies the thermal population generator for a given pump rate.
struct ThermalModel {
  nv::RateConstants rates;
  bool full_optical = false;
  thermal::Variant variant = thermal::Variant::corrected;

  [[nodiscard]] RMatrix population_generator(double pump) const;
  [[nodiscard]] Eigen::Index dimension() const { return full_optical ? 9 : 6; }
};

/// H_w(Omega, delta) on the two coherences and the 0/1 populations, zero
/// elsewhere. `dimension` is the full Liouville dimension (>= 4).
CMatrix work_superoperator(double rabi, double detuning, Eigen::Index dimension = 6);

/// -i H_w(0, delta) plus coherence decay at `pump` plus the population block.
CMatrix thermal_generator(const RMatrix& population_generator, double pump, double detuning);

/// Zeroes the coherence block.
CMatrix dephasing_projector(Eigen::Index dimension = 6);

/// exp(G_th tau_th) exp(-i H_w tau_w); dephased mode inserts the projector
/// before, between and after the strokes.
CMatrix cycle_propagator(const CycleConfig& cfg, const RMatrix& population_generator);

/// Eigenvector with eigenvalue nearest 1, scaled to unit population sum.
/// Throws DegeneracyError when a second eigenvalue lies within 1e-9 of 1.
CVector periodic_steady_state(const CMatrix& U);

/// <H0| (U_w - I) |rho_0> at the fixed point, where rho_0 is the state at
/// the start of the work stroke. Positive when the drive moves population
/// from |0> to |1>.
double work_per_cycle(const CycleConfig& cfg, const RMatrix& population_generator,
                      const EngineLevels& levels = {});

/// Steady state of the continuous engine: both drive and baths act at all
/// times with their time-averaged strengths.
CMatrix continuous_generator(const CycleConfig& cfg, const RMatrix& population_generator);
CVector continuous_steady_state(const CMatrix& generator);
double continuous_power_at(const CycleConfig& cfg, const RMatrix& population_generator,
                           const EngineLevels& levels = {});

struct Action {
  double simplified = 0.0;  // (rabi d + gamma_th (1 - d)) tau_cyc
  double formal = 0.0;      // integral of the generator operator norm
};

Action action_per_cycle(const CycleConfig& cfg, const RMatrix& population_generator,
                        double gamma_th);

/// Operator norm of the thermal-stroke generator at zero detuning.
double derived_gamma_th(const RMatrix& population_generator, double pump);

/// (1/4) omega10 d^2 Omega^2 tau_cyc.
double stochastic_bound(const CycleConfig& cfg, const EngineLevels& levels = {});

/// -(tau_w^2 / 2) <H0| H_w^2 |rho_pop>: the quadratic-order dephased work.
double dephased_work_expansion(const CycleConfig& cfg, const CVector& rho,
                               const EngineLevels& levels = {});

struct PowerResult {
  Mode mode = Mode::two_stroke;
  double work = 0.0;      // per cycle
  double power = 0.0;     // work / tau_cyc
  double action = 0.0;    // simplified action, units of hbar
  double action_formal = 0.0;
  double bound = 0.0;     // stochastic bound on power
  double rabi = 0.0;
  double gamma_th = 0.0;
  double tau_cyc = 0.0;
};

/// Detuning-averaged work and power (two-stroke or dephased).
PowerResult ensemble_power(const CycleConfig& cfg, const ThermalModel& model,
                           const DetuningDistribution& dist, double gamma_th = 0.41,
                           const EngineLevels& levels = {});

/// Detuning-averaged continuous engine power. The reported work is
/// power * tau_cyc for axis compatibility.
PowerResult continuous_power(const CycleConfig& cfg, const ThermalModel& model,
                             const DetuningDistribution& dist, double gamma_th = 0.41,
                             const EngineLevels& levels = {});

/// Average over the detuning distribution with the configured quadrature.
/// `period` > 0 adds comb breakpoints for stroboscopic resonances.
double detuning_average(const quadrature::ScalarFn& f, const DetuningDistribution& dist,
                        double period = 0.0);
RVector detuning_average(const quadrature::VectorFn& f, const DetuningDistribution& dist,
                         double period = 0.0);

struct DecoherencePoint {
  double tau_th = 0.0;
  double tau_th_over_t2 = 0.0;
  double pump = 0.0;
  double population_action = 0.0;
  double total_action = 0.0;
  double work = 0.0;
  double work_dephased = 0.0;
  double bound_work = 0.0;  // stochastic bound times tau_cyc
};

struct DecoherenceSweepConfig {
  double tau_w = 0.01;
  double rabi = 1.6;
  double total_action = 0.05;
  std::vector<double> tau_th_over_t2 = {0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0, 2.25};
};

/// Fixed work stroke; for each thermal-stroke duration the pump rate is
/// solved so that pump_transfer_rate * tau_th + rabi * tau_w = total_action.
std::vector<DecoherencePoint> decoherence_sweep(const DecoherenceSweepConfig& cfg,
                                                const ThermalModel& model,
                                                const DetuningDistribution& dist,
                                                const EngineLevels& levels = {});

struct HomogeneousDephasing {
  double t2_us = 0.0;
  bool negligible = false;  // T2 exceeds the longest cycle time
};

/// T2 = 1 / (alpha n), alpha = mu0 g^2 mu_B^2 / (4 pi hbar). n in cm^-3.
HomogeneousDephasing homogeneous_T2_estimate(double density_cm3, double longest_cycle_us = 0.18);

/// Coherent 0 -> 1 transfer rate [-i H_w rho(t)]_11 over the work stroke of
/// the two-stroke fixed point, sampled at `times` (0 <= t <= tau_w).
RVector transfer_rate_trace(const CycleConfig& cfg, const RMatrix& population_generator,
                            const std::vector<double>& times);

/// CSV sweep output: action_hbar, power, bound, mode, omega, gamma_th, tau_cyc.
void write_power_csv(std::ostream& out, const std::vector<PowerResult>& rows);

}  // namespace nvqhe::engine
