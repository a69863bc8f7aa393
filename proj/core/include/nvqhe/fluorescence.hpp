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

// Fluorescence response of the seven-level model to a periodic microwave
// transfer rate R(t), and the factor kappa that converts a relative
// fluorescence drop into <R>.
//
// Sign convention: the drive moves population from G0 to G+1, which lowers
// the fluorescence. kappa > 0 and the observable is the relative drop
// (<F0> - <F>) / <F0> > 0, so <R> = kappa * drop.

#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "nvqhe/engine.hpp"
#include "nvqhe/numerics.hpp"
#include "nvqhe/nv_model.hpp"

namespace nvqhe::fluorescence {

struct Segment {
  RMatrix generator;
  double duration = 0.0;
};

/// Two-time propagator Phi(t, s) of a piecewise-constant schedule on one
/// period [0, period].
class FundamentalSolution {
 public:
  explicit FundamentalSolution(std::vector<Segment> schedule);

  [[nodiscard]] double period() const { return period_; }
  [[nodiscard]] Eigen::Index dimension() const { return dim_; }
  [[nodiscard]] std::span<const Segment> schedule() const { return segments_; }

  /// Phi(t, s) for 0 <= s <= t <= period.
  [[nodiscard]] RMatrix operator()(double t, double s) const;
  /// Phi(period, 0).
  [[nodiscard]] RMatrix monodromy() const { return monodromy_; }

 private:
  std::vector<Segment> segments_;
  std::vector<double> starts_;
  RMatrix monodromy_;
  double period_ = 0.0;
  Eigen::Index dim_ = 0;
};

enum class Schedule { continuous, two_stroke };

struct KappaConfig {
  double pump = 0.5;  // MHz, laser-on excitation rate
  Schedule schedule = Schedule::two_stroke;
  double duty = 1.0 / 3.0;  // laser off for the first duty * tau_cyc
  double tau_cyc = 0.06;    // us
  std::size_t points = 256; // grid intervals per period
};

/// Laser off (M(0)) during the work stroke, on (M(pump)) during the thermal
/// stroke; constant M(pump) for the continuous schedule.
FundamentalSolution make_schedule(const nv::RateConstants& rc, const KappaConfig& cfg);

/// Sample grid with one uniform block per schedule segment. Segment
/// boundaries appear twice (once per side) so that functions with a jump at
/// a boundary integrate correctly.
struct TimeGrid {
  std::vector<double> t;
  std::vector<std::pair<std::size_t, std::size_t>> segments;  // inclusive index ranges
  std::vector<double> spacing;                                // per segment
  double period = 0.0;

  [[nodiscard]] std::size_t size() const { return t.size(); }
  /// Quadrature weights for integrating from sample `from` to sample `to`.
  [[nodiscard]] std::vector<double> weights(std::size_t from, std::size_t to) const;
  [[nodiscard]] std::vector<double> weights() const { return weights(0, t.size() - 1); }
};

TimeGrid make_grid(const FundamentalSolution& phi, std::size_t intervals);

/// nu: -1 on G0, +1 on G+1.
RVector drive_vector();

/// Undriven periodic state: eigenvector of Phi(period, 0) with eigenvalue
/// nearest 1, unit population sum.
RVector undriven_fixed_point(const FundamentalSolution& phi);

/// Spectral pseudo-inverse of I - Phi(period, 0).
RMatrix periodic_pseudo_inverse(const FundamentalSolution& phi);

struct PeriodicResponse {
  TimeGrid grid;
  RVector rho0;          // undriven periodic state at t = 0
  RVector sigma_tilde0;  // particular solution at t = 0; sums to zero
  std::vector<RVector> rho;
  std::vector<RVector> sigma;
};

/// Periodic solution of d/dt sigma = M(t) sigma + R(t) nu with R sampled on
/// the grid.
PeriodicResponse periodic_response(const FundamentalSolution& phi, const TimeGrid& grid,
                                   std::span<const double> rate);

struct Kernels {
  TimeGrid grid;
  RMatrix g;  // g(t_k, tau_j)
  RMatrix f;  // f(t_k, tau_j), zero for t_k < tau_j
  RMatrix h;
  RVector H;  // H(tau_j)
  double H_mean = 0.0;
  double H_variation = 0.0;  // (max - min) / |mean|
};

Kernels kernels(const FundamentalSolution& phi, const TimeGrid& grid);

struct KappaResult {
  double kappa = 0.0;  // MHz
  double pump = 0.0;
  Schedule schedule = Schedule::two_stroke;
  double duty = 0.0;
  double tau_cyc = 0.0;
  double H_mean = 0.0;
  double H_variation = 0.0;
  double mean_excited = 0.0;
  double sigma = 0.0;  // filled by uncertainty propagation
};

/// Throws KernelError when H varies by more than `max_variation`.
KappaResult kappa(const nv::RateConstants& rc, const KappaConfig& cfg,
                  double max_variation = 1e-2);

/// hbar omega10 kappa drop.
double power_from_fluorescence(double relative_drop, const KappaResult& k,
                               const engine::EngineLevels& levels = {});

struct FluorescenceTrace {
  std::vector<double> t;
  std::vector<double> F;   // driven, in units of excited population
  std::vector<double> F0;  // undriven
  double mean_F = 0.0;
  double mean_F0 = 0.0;
  double relative_drop = 0.0;  // (mean_F0 - mean_F) / mean_F0
};

FluorescenceTrace synthesize_fluorescence(const PeriodicResponse& response);

/// Detuning-averaged coherent transfer rate of the engine fixed point on the
/// grid: nonzero on the first (work) segment, zero elsewhere.
std::vector<double> engine_transfer_rate(const engine::CycleConfig& cfg,
                                         const engine::ThermalModel& model,
                                         const engine::DetuningDistribution& dist,
                                         const TimeGrid& grid);

/// CSV with columns gamma_mhz, kappa_mhz, mode, sigma.
void write_kappa_csv(std::ostream& out, const std::vector<KappaResult>& rows);

}  // namespace nvqhe::fluorescence
