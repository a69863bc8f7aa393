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

// Acceptance criteria. One line per criterion; exit status is the number of
// failures (capped at 1).

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "nvqhe/engine.hpp"
#include "nvqhe/fluorescence.hpp"
#include "nvqhe/numerics.hpp"
#include "nvqhe/nv_model.hpp"
#include "nvqhe/ode.hpp"
#include "nvqhe/thermal_emulation.hpp"
#include "nvqhe/uncertainty.hpp"

namespace {

using namespace nvqhe;

struct Outcome {
  bool passed = false;
  std::string detail;
};

char buf[512];

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

int failures = 0;

void run(int id, const char* name, double budget_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = secs <= budget_s;
  const bool ok = o.passed && in_time;
  if (!ok) ++failures;
  std::printf("[%s] %2d %-28s %s | %.2fs (limit %.0fs)%s\n", ok ? "PASS" : "FAIL", id, name,
              o.detail.c_str(), secs, budget_s, in_time ? "" : " TIMEOUT");
  std::fflush(stdout);
}

const nv::RateConstants kRates{};
constexpr double kOmega10 = 2.0 * 3.14159265358979323846 * 2600.0;

Outcome eigenvalue_golden() {
  const std::array<double, 7> printed = {0.0, -0.15, -0.22, -1.84, -74.28, -119.47, -119.48};
  const auto e = numerics::eig(nv::optical_matrix(kRates, 0.5));
  double worst = 0.0;
  int at = 0;
  for (int i = 0; i < 7; ++i) {
    const double d = std::abs(e.values(i).real() - printed[static_cast<std::size_t>(i)]);
    if (d > worst) {
      worst = d;
      at = i;
    }
  }
  return {worst <= 0.02,
          fmt("max |dlambda| = %.4f MHz at index %d (computed %.4f) tol 0.02", worst, at,
              e.values(at).real())};
}

Outcome expansion_golden() {
  const double L0[4][4] = {{-0.05, 0, 0, 0.97},
                           {0, -0.22, 0, 0.36},
                           {0, 0, -0.22, 0.36},
                           {0.05, 0.22, 0.22, -1.71}};
  const double L1[4][4] = {{-0.11, 0, 0, -0.01},
                           {0, -0.45, 0, 0},
                           {0, 0, -0.45, 0},
                           {0.11, 0.45, 0.45, 0}};
  const RMatrix l0 = thermal::thermal_operator(kRates, 0.5).corrected;
  const RMatrix l1 = thermal::linear_expansion(kRates, 0.5, 0.01, thermal::Variant::raw).L1;
  double d0 = 0.0;
  double d1 = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      d0 = std::max(d0, std::abs(l0(i, j) - L0[i][j]));
      d1 = std::max(d1, std::abs(l1(i, j) - L1[i][j]));
    }
  }
  return {d0 <= 0.01 && d1 <= 0.01,
          fmt("max |dL0| = %.4f, max |dL1| = %.4f MHz tol 0.01", d0, d1)};
}

Outcome emulation_validity() {
  std::vector<double> pumps, times;
  for (int i = 0; i <= 20; ++i) pumps.push_back(0.05 * i);
  for (int i = 0; i <= 200; ++i) times.push_back(0.05 * i);
  const auto s = thermal::emulation_error_surface(kRates, thermal::emulation_start_state(0.005),
                                                  pumps, times, thermal::Variant::raw);
  // The supremum equals the initial excited fraction; 1e-6 points of rounding slack.
  return {s.max_percent <= 0.5 + 1e-6,
          fmt("max error %.8f %% at Gamma=%.2f t=%.2f, limit 0.5 %% (+1e-6)", s.max_percent,
              s.argmax_pump, s.argmax_time)};
}

Outcome qhme() {
  const engine::ThermalModel model{kRates};
  const engine::DetuningDistribution dist;
  const std::array<double, 7> actions = {0.2, 0.15, 0.1, 0.07, 0.05, 0.03, 0.02};
  bool ok = true;
  std::string detail;
  for (double omega : {0.8, 1.6, 3.2}) {
    const auto cc = engine::CycleConfig::from_action(0.02, omega, 1.0 / 3.0, 0.41, 0.76,
                                                     engine::Mode::continuous);
    const double pc = engine::continuous_power(cc, model, dist).power;
    std::vector<double> gaps;
    for (double s : actions) {
      const auto c = engine::CycleConfig::from_action(s, omega, 1.0 / 3.0, 0.41, 0.76);
      gaps.push_back(std::abs(engine::ensemble_power(c, model, dist).power - pc) / std::abs(pc));
    }
    const std::size_t n = gaps.size();
    const bool shrinking = gaps[n - 1] < gaps[n - 2] && gaps[n - 2] < gaps[n - 3];
    ok = ok && gaps.back() <= 0.05 && shrinking;
    detail += fmt("W=%.1f gap %.2e%s ", omega, gaps.back(), shrinking ? "" : " (not monotone)");
  }
  return {ok, detail + "tol 5e-2"};
}

Outcome qts() {
  const engine::ThermalModel model{kRates};
  const engine::DetuningDistribution dist;
  const std::array<double, 7> actions = {0.4, 0.3, 0.2, 0.15, 0.1, 0.075, 0.05};
  double worst = -1e300;
  for (double s : actions) {
    const auto c = engine::CycleConfig::from_action(s, 1.6, 1.0 / 3.0, 0.41, 0.76,
                                                    engine::Mode::dephased_two_stroke);
    const auto p = engine::ensemble_power(c, model, dist);
    worst = std::max(worst, p.power - p.bound);
  }
  const auto c = engine::CycleConfig::from_action(0.05, 1.6, 1.0 / 3.0, 0.41, 0.76);
  const auto p = engine::ensemble_power(c, model, dist);
  return {p.power > p.bound && worst <= 1e-10,
          fmt("coherent P=%.3f vs bound %.3f at s=0.05; max(dephased - bound) = %.3e", p.power,
              p.bound, worst)};
}

Outcome expansion_consistency() {
  const engine::ThermalModel model{kRates};
  const RMatrix lp = model.population_generator(0.76);
  engine::EngineLevels levels;
  auto rel_error = [&](double s) {
    auto c = engine::CycleConfig::from_action(s, 1.6, 1.0 / 3.0, 0.41, 0.76,
                                              engine::Mode::dephased_two_stroke);
    const double exact = engine::work_per_cycle(c, lp, levels);
    const CVector rho = engine::periodic_steady_state(engine::cycle_propagator(c, lp));
    const double approx = engine::dephased_work_expansion(c, rho, levels);
    return std::abs(approx - exact) / std::abs(exact);
  };
  std::vector<double> xs, ys;
  for (int i = 0; i <= 8; ++i) {
    const double s = 0.01 * std::pow(10.0, i / 8.0);
    xs.push_back(std::log(s));
    ys.push_back(std::log(rel_error(s)));
  }
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double at005 = rel_error(0.05);
  return {at005 <= 0.01 && std::abs(slope - 2.0) <= 0.2,
          fmt("rel error %.2e at s=0.05 (tol 1e-2), log-log slope %.3f (2 +- 0.2)", at005,
              slope)};
}

Outcome decoherence_trend() {
  const auto pts = engine::decoherence_sweep({}, engine::ThermalModel{kRates},
                                             engine::DetuningDistribution{});
  double rise = -1e300;
  double late = -1e300;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i > 0) rise = std::max(rise, pts[i].work - pts[i - 1].work);
    if (pts[i].tau_th_over_t2 >= 2.0) late = std::max(late, pts[i].work - pts[i].bound_work);
  }
  return {rise < 0.0 && late < 0.0,
          fmt("largest step increase %.3e (< 0), max(work - bound) for tau_th >= 2 T2* = %.3f "
              "(< 0)",
              rise, late)};
}

Outcome kernel_flatness() {
  fluorescence::KappaConfig kc;
  kc.pump = 4.0 * 436.0e-3;
  kc.tau_cyc = 0.18;
  kc.duty = 1.0 / 3.0;
  const auto phi = fluorescence::make_schedule(kRates, kc);
  const auto k = fluorescence::kernels(phi, fluorescence::make_grid(phi, kc.points));
  return {k.H_variation <= 1e-3,
          fmt("H relative variation %.3e at Gamma=%.3f MHz, tau_cyc=%.2f us (tol 1e-3)",
              k.H_variation, kc.pump, kc.tau_cyc)};
}

Outcome closure() {
  const engine::ThermalModel model{kRates};
  const engine::DetuningDistribution dist;
  const auto cfg = engine::CycleConfig::from_action(0.02, 1.6, 1.0 / 3.0, 0.41, 0.76);
  const double direct = engine::ensemble_power(cfg, model, dist).power;
  fluorescence::KappaConfig kc;
  kc.pump = cfg.pump;
  kc.duty = cfg.duty;
  kc.tau_cyc = cfg.tau_cyc;
  const auto phi = fluorescence::make_schedule(kRates, kc);
  const auto grid = fluorescence::make_grid(phi, kc.points);
  const auto rate = fluorescence::engine_transfer_rate(cfg, model, dist, grid);
  const auto trace =
      fluorescence::synthesize_fluorescence(fluorescence::periodic_response(phi, grid, rate));
  const double recovered =
      fluorescence::power_from_fluorescence(trace.relative_drop, fluorescence::kappa(kRates, kc));
  const double rel = std::abs(recovered / direct - 1.0);
  return {rel <= 0.02,
          fmt("direct %.5f, recovered %.5f, relative deviation %.2e (tol 2e-2)", direct,
              recovered, rel)};
}

Outcome statistics_golden() {
  const auto r = uncertainty::bound_violation_test(2.4, std::sqrt(0.5), 0.0, std::sqrt(0.5));
  return {std::abs(r.p - 0.0082) <= 1e-4, fmt("p(t=%.2f) = %.6f (0.0082 +- 1e-4)", r.t, r.p)};
}

Outcome calibration_round_trip() {
  std::vector<double> powers;
  for (int i = 1; i <= 16; ++i) powers.push_back(0.25 * i);
  const double amplitude = 1.0e5;
  std::vector<nv::SaturationPoint> clean;
  for (double p : powers) clean.push_back({p, nv::saturation_model(p, 436.0, amplitude, kRates)});
  const auto f0 = nv::fit_gamma_calibration(clean, kRates);
  const double clean_err = std::abs(f0.r_khz_per_mw / 436.0 - 1.0);

  int covered = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::mt19937_64 gen(1000 + static_cast<std::uint64_t>(trial));
    std::normal_distribution<double> noise(0.0, 0.01);
    auto noisy = clean;
    for (auto& d : noisy) d.fluorescence *= 1.0 + noise(gen);
    const auto f = nv::fit_gamma_calibration(noisy, kRates);
    if (std::abs(f.r_khz_per_mw - 436.0) <= 3.0 * f.r_sigma) ++covered;
  }
  return {clean_err <= 1e-3 && covered >= 95,
          fmt("noiseless relative error %.2e (tol 1e-3); 3-sigma coverage %d/100 (>= 95)",
              clean_err, covered)};
}

Outcome oracle_equivalence() {
  std::mt19937_64 gen(12345);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  double worst = 0.0;
  auto compare = [&](const CMatrix& g, double t) {
    const CMatrix expm = numerics::mat_exp(g, t);
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      const CVector e = CVector::Unit(g.cols(), j);
      const CVector y = numerics::ode_propagate(g, e, t);
      worst = std::max(worst, (y - expm.col(j)).cwiseAbs().maxCoeff());
    }
  };
  for (int k = 0; k < 100; ++k) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(k % 8);
    CMatrix g(n, n);
    if (k % 2 == 0) {
      // Random rate generator: nonnegative off-diagonal, zero column sums.
      RMatrix r(n, n);
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) r(i, j) = i == j ? 0.0 : 5.0 * uniform(gen);
      g = nv::build_M(r).cast<Complex>();
    } else {
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) g(i, j) = Complex(normal(gen), normal(gen));
    }
    compare(g, 1.0);
  }
  compare(nv::optical_matrix(kRates, 0.5).cast<Complex>(), 1.0);
  const double expm_gap = worst;

  const engine::ThermalModel model{kRates};
  const RMatrix lp = model.population_generator(0.76);
  auto cfg = engine::CycleConfig::from_action(0.05, 1.6, 1.0 / 3.0, 0.41, 0.76);
  cfg.detuning = 2.0;
  const CVector fixed = engine::periodic_steady_state(engine::cycle_propagator(cfg, lp));
  const CMatrix work = Complex(0.0, -1.0) * engine::work_superoperator(cfg.rabi, cfg.detuning);
  const CMatrix thermal = engine::thermal_generator(lp, cfg.pump, cfg.detuning);
  const std::array<numerics::GeneratorSegment, 2> schedule = {
      numerics::GeneratorSegment{work, cfg.tau_w()},
      numerics::GeneratorSegment{thermal, cfg.tau_th()}};
  CVector start = CVector::Zero(6);
  start.tail(4) = nv::steady_state(lp).cast<Complex>();
  const CVector y = numerics::ode_propagate_periodic(schedule, start, 10000);
  const double fp_gap = (y - fixed).cwiseAbs().maxCoeff();
  return {expm_gap <= 1e-8 && fp_gap <= 1e-7,
          fmt("expm vs ODE max abs %.2e (tol 1e-8); fixed point vs 1e4 cycles %.2e (tol 1e-7)",
              expm_gap, fp_gap)};
}

}  // namespace

int main() {
  run(1, "eigenvalue golden", 1, eigenvalue_golden);
  run(2, "L0/L1 golden", 1, expansion_golden);
  run(3, "emulation validity", 10, emulation_validity);
  run(4, "QHME convergence", 30, qhme);
  run(5, "QTS bound violation", 10, qts);
  run(6, "bound-expansion consistency", 10, expansion_consistency);
  run(7, "decoherence trend", 30, decoherence_trend);
  run(8, "kernel flatness", 10, kernel_flatness);
  run(9, "end-to-end closure", 30, closure);
  run(10, "statistics golden", 1, statistics_golden);
  run(11, "calibration round trip", 30, calibration_round_trip);
  run(12, "oracle equivalence", 60, oracle_equivalence);
  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
