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

#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "nvqhe/engine.hpp"
#include "nvqhe/errors.hpp"
#include "nvqhe/numerics.hpp"

namespace nvqhe::engine {
namespace {

const nv::RateConstants kRates{};
const Complex kI(0.0, 1.0);

double rabi_probability(double rabi, double detuning, double t) {
  const double w = std::hypot(rabi, detuning);
  const double s = std::sin(0.5 * w * t);
  return rabi * rabi / (w * w) * s * s;
}

TEST(WorkStroke, RabiFormulaFromGroundState) {
  for (double delta : {0.0, 0.7, -2.5}) {
    const CMatrix g = -kI * work_superoperator(1.6, delta);
    CVector rho = CVector::Zero(6);
    rho(idx::r00) = 1.0;
    for (double t : {0.1, 0.9, 3.3}) {
      const CVector out = numerics::mat_exp(g, t) * rho;
      EXPECT_NEAR(out(idx::r11).real(), rabi_probability(1.6, delta, t), 1e-12);
      EXPECT_NEAR(out(idx::r01).real(), out(idx::r10).real(), 1e-12);
      EXPECT_NEAR(out(idx::r01).imag(), -out(idx::r10).imag(), 1e-12);
    }
  }
}

TEST(ThermalStroke, CoherenceDecaysAtPumpRate) {
  const RMatrix lp = ThermalModel{kRates}.population_generator(0.76);
  const CMatrix g = thermal_generator(lp, 0.76, 1.3);
  CVector rho = CVector::Zero(6);
  rho(idx::r01) = 0.2;
  rho(idx::r10) = 0.2;
  const double t = 0.4;
  const CVector out = numerics::mat_exp(g, t) * rho;
  const Complex expected = 0.2 * std::exp(Complex(-0.76, 1.3) * t);
  EXPECT_LT(std::abs(out(idx::r01) - expected), 1e-12);
  EXPECT_LT(std::abs(out(idx::r10) - std::conj(expected)), 1e-12);
}

TEST(Cycle, PropagatorPreservesPopulation) {
  const ThermalModel model{kRates};
  for (Mode mode : {Mode::two_stroke, Mode::dephased_two_stroke}) {
    const auto cfg = CycleConfig::from_action(0.1, 1.6, 1.0 / 3.0, 0.41, 0.76, mode);
    const CMatrix u = cycle_propagator(cfg, model.population_generator(cfg.pump));
    CVector w = CVector::Zero(6);
    w.tail(4).setOnes();
    EXPECT_LT((u.transpose() * w - w).cwiseAbs().maxCoeff(), 1e-12);
    const CVector rho = periodic_steady_state(u);
    EXPECT_LT((u * rho - rho).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(rho.tail(4).sum().real(), 1.0, 1e-12);
  }
}

TEST(Cycle, DephasedWorkMatchesMarkovChain) {
  const RMatrix lp = ThermalModel{kRates}.population_generator(0.76);
  auto cfg = CycleConfig::from_action(0.2, 1.6, 1.0 / 3.0, 0.41, 0.76, Mode::dephased_two_stroke);
  cfg.detuning = 0.9;
  const double q = rabi_probability(cfg.rabi, cfg.detuning, cfg.tau_w());
  RMatrix swap = RMatrix::Identity(4, 4);
  swap(0, 0) = swap(1, 1) = 1.0 - q;
  swap(0, 1) = swap(1, 0) = q;
  const RMatrix chain = numerics::mat_exp(lp, cfg.tau_th()) * swap;
  RVector p = RVector::Constant(4, 0.25);
  for (int i = 0; i < 200000; ++i) p = chain * p;
  const double expected = EngineLevels{}.omega10 * q * (p(0) - p(1));
  EXPECT_NEAR(work_per_cycle(cfg, lp), expected, 1e-9 * std::abs(expected));
}

TEST(Cycle, DephasedExpansionIsQuadraticInDuration) {
  const RMatrix lp = ThermalModel{kRates}.population_generator(0.76);
  auto rel = [&](double s) {
    const auto cfg =
        CycleConfig::from_action(s, 1.6, 1.0 / 3.0, 0.41, 0.76, Mode::dephased_two_stroke);
    const CVector rho = periodic_steady_state(cycle_propagator(cfg, lp));
    const double exact = work_per_cycle(cfg, lp);
    return std::abs(dephased_work_expansion(cfg, rho) - exact) / std::abs(exact);
  };
  EXPECT_NEAR(std::log(rel(0.02) / rel(0.01)) / std::log(2.0), 2.0, 0.1);
}

TEST(Cycle, ContinuousLimitAtZeroDetuning) {
  const ThermalModel model{kRates};
  const RMatrix lp = model.population_generator(0.76);
  const auto cc = CycleConfig::from_action(0.005, 1.6, 1.0 / 3.0, 0.41, 0.76, Mode::continuous);
  const double pc = continuous_power_at(cc, lp);
  const auto c = CycleConfig::from_action(0.005, 1.6, 1.0 / 3.0, 0.41, 0.76);
  const double p2 = work_per_cycle(c, lp) / c.tau_cyc;
  EXPECT_LT(std::abs(p2 - pc) / std::abs(pc), 1e-2);
  EXPECT_THROW(work_per_cycle(cc, lp), DomainError);
}

TEST(Config, ActionAndBoundClosedForm) {
  const auto c = CycleConfig::from_action(0.05, 1.6, 1.0 / 3.0, 0.41, 0.76);
  const double rate = 1.6 / 3.0 + 0.41 * 2.0 / 3.0;
  EXPECT_NEAR(c.tau_cyc, 0.05 / rate, 1e-15);
  const auto a = action_per_cycle(c, ThermalModel{kRates}.population_generator(0.76), 0.41);
  EXPECT_NEAR(a.simplified, 0.05, 1e-15);
  EXPECT_GT(a.formal, 0.0);
  const double omega10 = 2.0 * std::numbers::pi * 2600.0;
  EXPECT_NEAR(stochastic_bound(c), omega10 / 4.0 * (1.0 / 9.0) * 2.56 * (0.05 / rate), 1e-9);
  EXPECT_THROW(CycleConfig::from_action(0.05, 1.6, 1.5, 0.41, 0.76), DomainError);
}

TEST(Config, ModeNamesRoundTrip) {
  for (Mode m : {Mode::two_stroke, Mode::continuous, Mode::dephased_two_stroke}) {
    EXPECT_EQ(mode_from_string(to_string(m)), m);
  }
  EXPECT_THROW(mode_from_string("otto"), DomainError);
}

TEST(Detuning, T2StarAndQuadratureAgreement) {
  const DetuningDistribution d;
  EXPECT_NEAR(d.t2_star(), 0.0757, 5e-4);
  EXPECT_NEAR(DetuningDistribution::from_t2_star(d.t2_star()).fwhm, d.fwhm, 1e-12);
  DetuningDistribution gh = d;
  gh.quadrature = QuadratureKind::gauss_hermite;
  const auto f = [](double x) { return std::exp(-0.001 * x * x) * std::cos(0.03 * x); };
  EXPECT_NEAR(detuning_average(f, d), detuning_average(f, gh), 1e-9);
}

TEST(Populations, BlockSwapsSpinProjections) {
  RMatrix l(4, 4);
  for (Eigen::Index i = 0; i < 4; ++i)
    for (Eigen::Index j = 0; j < 4; ++j) l(i, j) = 10.0 * static_cast<double>(i) + static_cast<double>(j);
  const RMatrix b = population_block(l);
  EXPECT_EQ(b(1, 1), l(2, 2));
  EXPECT_EQ(b(1, 2), l(2, 1));
  EXPECT_EQ(b(0, 3), l(0, 3));
  EXPECT_EQ(b(3, 1), l(3, 2));
}

TEST(Ensemble, DephasedPowerStaysBelowBound) {
  const ThermalModel model{kRates};
  const DetuningDistribution dist;
  for (double s : {0.4, 0.1, 0.05}) {
    const auto c =
        CycleConfig::from_action(s, 1.6, 1.0 / 3.0, 0.41, 0.76, Mode::dephased_two_stroke);
    const auto p = ensemble_power(c, model, dist);
    EXPECT_LE(p.power, p.bound) << s;
    EXPECT_NEAR(p.power * p.tau_cyc, p.work, 1e-12 * std::abs(p.work));
  }
}

TEST(Ensemble, AdaptiveAverageMatchesDenseTrapezoid) {
  // The per-detuning work has a resonance ~1.5 Mrad/s wide at zero detuning.
  const ThermalModel model{kRates};
  const DetuningDistribution dist;
  const RMatrix lp = model.population_generator(0.76);
  auto cfg = CycleConfig::from_action(0.05, 1.6, 1.0 / 3.0, 0.41, 0.76);
  const double sigma = dist.fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
  const double h = 0.05;
  double acc = 0.0;
  for (int i = -3200; i <= 3200; ++i) {
    cfg.detuning = h * i;
    const double x = cfg.detuning / sigma;
    acc += h * std::exp(-0.5 * x * x) / (sigma * std::sqrt(2.0 * std::numbers::pi)) *
           work_per_cycle(cfg, lp);
  }
  cfg.detuning = 0.0;
  const double expected = acc / cfg.tau_cyc;
  EXPECT_NEAR(ensemble_power(cfg, model, dist).power, expected, 1e-6 * expected);
}

TEST(Misc, HomogeneousT2ScalesInverselyWithDensity) {
  const auto a = homogeneous_T2_estimate(1e17);
  const auto b = homogeneous_T2_estimate(2e17);
  EXPECT_NEAR(a.t2_us / b.t2_us, 2.0, 1e-12);
  EXPECT_THROW(homogeneous_T2_estimate(0.0), DomainError);
  std::ostringstream out;
  write_power_csv(out, {PowerResult{}});
  EXPECT_EQ(out.str().rfind("action_hbar,power,bound,mode,omega,gamma_th,tau_cyc\n", 0), 0u);
}

}  // namespace
}  // namespace nvqhe::engine
