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

#include "nvqhe/engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

#include <Eigen/Eigenvalues>

#include "nvqhe/errors.hpp"
#include "nvqhe/parallel.hpp"

namespace nvqhe::engine {

namespace {

constexpr Complex kI(0.0, 1.0);

CMatrix permuted(const RMatrix& a, std::span<const Eigen::Index> perm) {
  const auto n = static_cast<Eigen::Index>(perm.size());
  CMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      out(i, j) = a(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
    }
  }
  return out;
}

CycleConfig at_detuning(const CycleConfig& cfg, double delta) {
  CycleConfig c = cfg;
  c.detuning = cfg.detuning + delta;
  return c;
}

}  // namespace

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::two_stroke:
      return "two_stroke";
    case Mode::continuous:
      return "continuous";
    case Mode::dephased_two_stroke:
      return "dephased_two_stroke";
  }
  return "unknown";
}

Mode mode_from_string(std::string_view s) {
  if (s == "two_stroke") return Mode::two_stroke;
  if (s == "continuous") return Mode::continuous;
  if (s == "dephased_two_stroke" || s == "dephased") return Mode::dephased_two_stroke;
  throw DomainError("unknown engine mode '" + std::string(s) + "'");
}

void CycleConfig::validate() const {
  if (!std::isfinite(rabi) || !std::isfinite(detuning)) {
    throw DomainError("CycleConfig: rabi and detuning must be finite");
  }
  if (!(tau_cyc >= 0.0) || !std::isfinite(tau_cyc)) {
    throw DomainError("CycleConfig: tau_cyc must be finite and >= 0");
  }
  if (!(duty > 0.0 && duty < 1.0)) throw DomainError("CycleConfig: duty must lie in (0, 1)");
  if (!(pump >= 0.0) || !std::isfinite(pump)) throw DomainError("CycleConfig: pump must be >= 0");
}

CycleConfig CycleConfig::from_strokes(double tau_w, double tau_th, double rabi, double pump,
                                      Mode mode) {
  if (!(tau_w > 0.0) || !(tau_th > 0.0)) {
    throw DomainError("CycleConfig::from_strokes: stroke durations must be > 0");
  }
  CycleConfig c;
  c.rabi = rabi;
  c.tau_cyc = tau_w + tau_th;
  c.duty = tau_w / c.tau_cyc;
  c.pump = pump;
  c.mode = mode;
  return c;
}

CycleConfig CycleConfig::from_action(double action, double rabi, double duty, double gamma_th,
                                     double pump, Mode mode) {
  const double rate = rabi * duty + gamma_th * (1.0 - duty);
  if (!(rate > 0.0)) throw DomainError("CycleConfig::from_action: zero action rate");
  CycleConfig c;
  c.rabi = rabi;
  c.duty = duty;
  c.tau_cyc = action / rate;
  c.pump = pump;
  c.mode = mode;
  c.validate();
  return c;
}

double DetuningDistribution::t2_star() const {
  return 4.0 * std::sqrt(std::numbers::ln2) / fwhm;
}

DetuningDistribution DetuningDistribution::from_t2_star(double t2_star_us) {
  if (!(t2_star_us > 0.0)) throw DomainError("from_t2_star: T2* must be > 0");
  DetuningDistribution d;
  d.fwhm = 4.0 * std::sqrt(std::numbers::ln2) / t2_star_us;
  return d;
}

RMatrix population_block(const RMatrix& L_reduced) {
  if (L_reduced.rows() != 4 || L_reduced.cols() != 4) {
    throw DimensionError("population_block: expected the 4x4 reduced operator");
  }
  constexpr std::array<Eigen::Index, 4> perm = {0, 2, 1, 3};
  return permuted(L_reduced, perm).real();
}

RMatrix population_block_full(const RMatrix& M) {
  if (M.rows() != nv::level::kCount || M.cols() != nv::level::kCount) {
    throw DimensionError("population_block_full: expected the 7x7 optical generator");
  }
  constexpr std::array<Eigen::Index, 7> perm = {nv::level::G0, nv::level::Gp1, nv::level::Gm1,
                                                nv::level::S,  nv::level::E0,  nv::level::Ep1,
                                                nv::level::Em1};
  return permuted(M, perm).real();
}

RMatrix ThermalModel::population_generator(double pump) const {
  if (full_optical) return population_block_full(nv::optical_matrix(rates, pump));
  return population_block(thermal::thermal_operator(rates, pump).matrix(variant));
}

CMatrix work_superoperator(double rabi, double detuning, Eigen::Index dimension) {
  if (dimension < 4) throw DimensionError("work_superoperator: dimension must be >= 4");
  CMatrix h = CMatrix::Zero(dimension, dimension);
  const double half = 0.5 * rabi;
  h(0, 0) = -detuning;
  h(1, 1) = detuning;
  h(0, 2) = -half;
  h(0, 3) = half;
  h(1, 2) = half;
  h(1, 3) = -half;
  h(2, 0) = -half;
  h(2, 1) = half;
  h(3, 0) = half;
  h(3, 1) = -half;
  return h;
}

CMatrix thermal_generator(const RMatrix& population_generator, double pump, double detuning) {
  numerics::require_square(population_generator, "thermal_generator");
  const Eigen::Index n = population_generator.rows() + 2;
  CMatrix g = -kI * work_superoperator(0.0, detuning, n);
  g(idx::r01, idx::r01) -= pump;
  g(idx::r10, idx::r10) -= pump;
  g.bottomRightCorner(n - 2, n - 2) += population_generator.cast<Complex>();
  return g;
}

CMatrix dephasing_projector(Eigen::Index dimension) {
  CMatrix d = CMatrix::Identity(dimension, dimension);
  d(idx::r01, idx::r01) = 0.0;
  d(idx::r10, idx::r10) = 0.0;
  return d;
}

CMatrix cycle_propagator(const CycleConfig& cfg, const RMatrix& population_generator) {
  if (cfg.mode == Mode::continuous) {
    throw DomainError("cycle_propagator: continuous mode has no stroke propagator");
  }
  const Eigen::Index n = population_generator.rows() + 2;
  const CMatrix u_work =
      numerics::mat_exp(CMatrix(-kI * work_superoperator(cfg.rabi, cfg.detuning, n)), cfg.tau_w());
  const CMatrix u_thermal = numerics::mat_exp(
      thermal_generator(population_generator, cfg.pump, cfg.detuning), cfg.tau_th());
  if (cfg.mode == Mode::dephased_two_stroke) {
    const CMatrix d = dephasing_projector(n);
    return d * u_thermal * d * u_work * d;
  }
  return u_thermal * u_work;
}

CVector periodic_steady_state(const CMatrix& U) {
  const numerics::EigenDecomposition e = numerics::eig(U);
  Eigen::Index best = -1;
  double best_dist = std::numeric_limits<double>::infinity();
  double second = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    const double dist = std::abs(e.values(i) - 1.0);
    if (dist < best_dist) {
      second = best_dist;
      best_dist = dist;
      best = i;
    } else if (dist < second) {
      second = dist;
    }
  }
  if (second <= 1e-9) {
    throw DegeneracyError("periodic_steady_state: more than one eigenvalue within 1e-9 of 1");
  }
  CVector rho = e.vectors.col(best);
  const Complex total = rho.tail(rho.size() - idx::first_population).sum();
  if (std::abs(total) < 1e-12) {
    throw DegeneracyError("periodic_steady_state: fixed point carries no population");
  }
  return rho / total;
}

double work_per_cycle(const CycleConfig& cfg, const RMatrix& population_generator,
                      const EngineLevels& levels) {
  const Eigen::Index n = population_generator.rows() + 2;
  const CMatrix u_work =
      numerics::mat_exp(CMatrix(-kI * work_superoperator(cfg.rabi, cfg.detuning, n)), cfg.tau_w());
  const CMatrix u_thermal = numerics::mat_exp(
      thermal_generator(population_generator, cfg.pump, cfg.detuning), cfg.tau_th());
  CMatrix u;
  if (cfg.mode == Mode::dephased_two_stroke) {
    const CMatrix d = dephasing_projector(n);
    u = d * u_thermal * d * u_work * d;
  } else if (cfg.mode == Mode::two_stroke) {
    u = u_thermal * u_work;
  } else {
    throw DomainError("work_per_cycle: continuous mode has no stroke work");
  }
  const CVector rho = periodic_steady_state(u);
  const CVector change = u_work * rho - rho;
  return levels.omega10 * change(idx::r11).real();
}

CMatrix continuous_generator(const CycleConfig& cfg, const RMatrix& population_generator) {
  const double d = cfg.duty;
  const Eigen::Index n = population_generator.rows() + 2;
  CMatrix g = -kI * work_superoperator(d * cfg.rabi, cfg.detuning, n);
  g(idx::r01, idx::r01) -= (1.0 - d) * cfg.pump;
  g(idx::r10, idx::r10) -= (1.0 - d) * cfg.pump;
  g.bottomRightCorner(n - 2, n - 2) += (1.0 - d) * population_generator.cast<Complex>();
  return g;
}

CVector continuous_steady_state(const CMatrix& generator) {
  const numerics::EigenDecomposition e = numerics::eig(generator);
  Eigen::Index best = -1;
  double best_abs = std::numeric_limits<double>::infinity();
  double second = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    const double a = std::abs(e.values(i));
    if (a < best_abs) {
      second = best_abs;
      best_abs = a;
      best = i;
    } else if (a < second) {
      second = a;
    }
  }
  const double scale = std::max(1.0, generator.cwiseAbs().maxCoeff());
  if (second <= 1e-9 * scale) {
    throw DegeneracyError("continuous_steady_state: null space is not one-dimensional");
  }
  CVector rho = e.vectors.col(best);
  const Complex total = rho.tail(rho.size() - idx::first_population).sum();
  if (std::abs(total) < 1e-12) {
    throw DegeneracyError("continuous_steady_state: null vector carries no population");
  }
  return rho / total;
}

double continuous_power_at(const CycleConfig& cfg, const RMatrix& population_generator,
                           const EngineLevels& levels) {
  const Eigen::Index n = population_generator.rows() + 2;
  const CVector rho = continuous_steady_state(continuous_generator(cfg, population_generator));
  const CVector flow = -kI * (work_superoperator(cfg.duty * cfg.rabi, cfg.detuning, n) * rho);
  return levels.omega10 * flow(idx::r11).real();
}

Action action_per_cycle(const CycleConfig& cfg, const RMatrix& population_generator,
                        double gamma_th) {
  Action a;
  a.simplified = (cfg.rabi * cfg.duty + gamma_th * (1.0 - cfg.duty)) * cfg.tau_cyc;
  const Eigen::Index n = population_generator.rows() + 2;
  a.formal = numerics::spectral_norm(work_superoperator(cfg.rabi, cfg.detuning, n)) * cfg.tau_w() +
             numerics::spectral_norm(
                 thermal_generator(population_generator, cfg.pump, cfg.detuning)) *
                 cfg.tau_th();
  return a;
}

double derived_gamma_th(const RMatrix& population_generator, double pump) {
  return numerics::spectral_norm(thermal_generator(population_generator, pump, 0.0));
}

double stochastic_bound(const CycleConfig& cfg, const EngineLevels& levels) {
  return 0.25 * levels.omega10 * cfg.duty * cfg.duty * cfg.rabi * cfg.rabi * cfg.tau_cyc;
}

double dephased_work_expansion(const CycleConfig& cfg, const CVector& rho,
                               const EngineLevels& levels) {
  const Eigen::Index n = rho.size();
  const CVector populations = dephasing_projector(n) * rho;
  const CMatrix h = work_superoperator(cfg.rabi, cfg.detuning, n);
  const CVector second = h * (h * populations);
  const double tw = cfg.tau_w();
  return -0.5 * tw * tw * levels.omega10 * second(idx::r11).real();
}

double detuning_average(const quadrature::ScalarFn& f, const DetuningDistribution& dist,
                        double period) {
  if (dist.fwhm == 0.0) return f(0.0);
  if (dist.quadrature == QuadratureKind::gauss_hermite) {
    return quadrature::gauss_average(f, dist.fwhm, dist.gauss_hermite_points);
  }
  const double limit = dist.adaptive.width_sigmas * quadrature::fwhm_to_sigma(dist.fwhm);
  const std::vector<double> cuts = quadrature::comb_breakpoints(period, limit);
  return quadrature::adaptive_gauss_average(f, dist.fwhm, cuts, dist.adaptive);
}

RVector detuning_average(const quadrature::VectorFn& f, const DetuningDistribution& dist,
                         double period) {
  if (dist.fwhm == 0.0) return f(0.0);
  if (dist.quadrature == QuadratureKind::gauss_hermite) {
    const quadrature::Rule rule = quadrature::gauss_hermite_rule(dist.gauss_hermite_points);
    const double sigma = quadrature::fwhm_to_sigma(dist.fwhm);
    RVector acc;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const RVector v = rule.weights[k] * f(sigma * rule.nodes[k]);
      acc = k == 0 ? v : RVector(acc + v);
    }
    return acc;
  }
  const double limit = dist.adaptive.width_sigmas * quadrature::fwhm_to_sigma(dist.fwhm);
  const std::vector<double> cuts = quadrature::comb_breakpoints(period, limit);
  return quadrature::adaptive_gauss_average(f, dist.fwhm, cuts, dist.adaptive);
}

PowerResult ensemble_power(const CycleConfig& cfg, const ThermalModel& model,
                           const DetuningDistribution& dist, double gamma_th,
                           const EngineLevels& levels) {
  if (cfg.mode == Mode::continuous) return continuous_power(cfg, model, dist, gamma_th, levels);
  cfg.validate();
  if (!(cfg.tau_cyc > 0.0)) throw DomainError("ensemble_power: tau_cyc must be > 0");
  const RMatrix lp = model.population_generator(cfg.pump);
  PowerResult r;
  r.mode = cfg.mode;
  r.work = detuning_average(
      [&](double delta) { return work_per_cycle(at_detuning(cfg, delta), lp, levels); }, dist,
      cfg.tau_cyc);
  r.power = r.work / cfg.tau_cyc;
  const Action a = action_per_cycle(cfg, lp, gamma_th);
  r.action = a.simplified;
  r.action_formal = a.formal;
  r.bound = stochastic_bound(cfg, levels);
  r.rabi = cfg.rabi;
  r.gamma_th = gamma_th;
  r.tau_cyc = cfg.tau_cyc;
  return r;
}

PowerResult continuous_power(const CycleConfig& cfg, const ThermalModel& model,
                             const DetuningDistribution& dist, double gamma_th,
                             const EngineLevels& levels) {
  cfg.validate();
  const RMatrix lp = model.population_generator(cfg.pump);
  PowerResult r;
  r.mode = Mode::continuous;
  r.power = detuning_average(
      [&](double delta) { return continuous_power_at(at_detuning(cfg, delta), lp, levels); },
      dist);
  r.work = r.power * cfg.tau_cyc;
  const Action a = action_per_cycle(cfg, lp, gamma_th);
  r.action = a.simplified;
  r.action_formal = a.formal;
  r.bound = stochastic_bound(cfg, levels);
  r.rabi = cfg.rabi;
  r.gamma_th = gamma_th;
  r.tau_cyc = cfg.tau_cyc;
  return r;
}

std::vector<DecoherencePoint> decoherence_sweep(const DecoherenceSweepConfig& cfg,
                                                const ThermalModel& model,
                                                const DetuningDistribution& dist,
                                                const EngineLevels& levels) {
  const double population_action = cfg.total_action - cfg.rabi * cfg.tau_w;
  if (!(population_action > 0.0)) {
    throw ConstraintError("decoherence_sweep: work stroke alone exceeds the total action");
  }
  const double t2 = dist.t2_star();
  return parallel_map(cfg.tau_th_over_t2.size(), [&](std::size_t i) {
    DecoherencePoint p;
    p.tau_th_over_t2 = cfg.tau_th_over_t2[i];
    p.tau_th = p.tau_th_over_t2 * t2;
    if (!(p.tau_th > 0.0)) throw DomainError("decoherence_sweep: tau_th must be > 0");
    p.pump = thermal::solve_pump_for_transfer_rate(model.rates, population_action / p.tau_th);
    p.population_action =
        thermal::pump_transfer_rate(thermal::thermal_operator(model.rates, p.pump).corrected) *
        p.tau_th;
    p.total_action = p.population_action + cfg.rabi * cfg.tau_w;
    CycleConfig c = CycleConfig::from_strokes(cfg.tau_w, p.tau_th, cfg.rabi, p.pump);
    const RMatrix lp = model.population_generator(p.pump);
    p.work = detuning_average(
        [&](double delta) { return work_per_cycle(at_detuning(c, delta), lp, levels); }, dist,
        c.tau_cyc);
    c.mode = Mode::dephased_two_stroke;
    p.work_dephased = detuning_average(
        [&](double delta) { return work_per_cycle(at_detuning(c, delta), lp, levels); }, dist,
        c.tau_cyc);
    p.bound_work = stochastic_bound(c, levels) * c.tau_cyc;
    return p;
  });
}

HomogeneousDephasing homogeneous_T2_estimate(double density_cm3, double longest_cycle_us) {
  if (!(density_cm3 > 0.0)) throw DomainError("homogeneous_T2_estimate: density must be > 0");
  constexpr double mu0_over_4pi = 1e-7;            // T m / A
  constexpr double bohr_magneton = 9.2740100783e-24;  // J / T
  constexpr double hbar = 1.054571817e-34;           // J s
  constexpr double g = 2.0;
  const double alpha = mu0_over_4pi * g * g * bohr_magneton * bohr_magneton / hbar;  // m^3 / s
  const double density_m3 = density_cm3 * 1e6;
  HomogeneousDephasing out;
  out.t2_us = 1e6 / (alpha * density_m3);
  out.negligible = out.t2_us > longest_cycle_us;
  return out;
}

RVector transfer_rate_trace(const CycleConfig& cfg, const RMatrix& population_generator,
                            const std::vector<double>& times) {
  CycleConfig two = cfg;
  two.mode = Mode::two_stroke;
  const Eigen::Index n = population_generator.rows() + 2;
  const CVector rho0 = periodic_steady_state(cycle_propagator(two, population_generator));
  const CMatrix h = work_superoperator(cfg.rabi, cfg.detuning, n);
  // H_w is real symmetric, so exp(-i H t) = V exp(-i Lambda t) V^T.
  Eigen::SelfAdjointEigenSolver<RMatrix> solver(h.real());
  const RMatrix& v = solver.eigenvectors();
  const RVector& lam = solver.eigenvalues();
  const CVector coeff = v.transpose().cast<Complex>() * rho0;
  RVector out(static_cast<Eigen::Index>(times.size()));
  for (std::size_t k = 0; k < times.size(); ++k) {
    CVector phase(n);
    for (Eigen::Index j = 0; j < n; ++j) phase(j) = coeff(j) * std::exp(-kI * lam(j) * times[k]);
    const CVector rho = v.cast<Complex>() * phase;
    out(static_cast<Eigen::Index>(k)) = (-kI * (h.row(idx::r11) * rho)(0)).real();
  }
  return out;
}

void write_power_csv(std::ostream& out, const std::vector<PowerResult>& rows) {
  out << "action_hbar,power,bound,mode,omega,gamma_th,tau_cyc\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.8e,%.8e,%.8e,%s,%.8e,%.8e,%.8e\n", r.action, r.power,
                  r.bound, std::string(to_string(r.mode)).c_str(), r.rabi, r.gamma_th, r.tau_cyc);
    out << buf;
  }
}

}  // namespace nvqhe::engine
