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

#include <array>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "nvqhe/errors.hpp"
#include "nvqhe/fluorescence.hpp"
#include "nvqhe/ode.hpp"

namespace nvqhe::fluorescence {
namespace {

const nv::RateConstants kRates{};

KappaConfig config(double pump, double tau_cyc) {
  KappaConfig c;
  c.pump = pump;
  c.tau_cyc = tau_cyc;
  c.points = 96;
  return c;
}

TEST(FundamentalSolution, CompositionAndBounds) {
  const auto phi = make_schedule(kRates, config(1.0, 0.3));
  EXPECT_NEAR(phi.period(), 0.3, 1e-15);
  EXPECT_EQ(phi.dimension(), 7);
  const RMatrix a = phi(0.25, 0.05);
  const RMatrix b = phi(0.25, 0.15) * phi(0.15, 0.05);
  EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((phi(0.3, 0.0) - phi.monodromy()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((phi(0.2, 0.2) - RMatrix::Identity(7, 7)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW((void)phi(0.1, 0.2), DomainError);
  EXPECT_THROW((void)phi(0.4, 0.0), DomainError);
}

TEST(FundamentalSolution, MatchesOdeAcrossLaserSwitch) {
  const auto phi = make_schedule(kRates, config(1.0, 0.3));
  const auto seg = phi.schedule();
  ASSERT_EQ(seg.size(), 2u);
  const std::array<numerics::GeneratorSegment, 2> ode = {
      numerics::GeneratorSegment{seg[0].generator.cast<Complex>(), seg[0].duration},
      numerics::GeneratorSegment{seg[1].generator.cast<Complex>(), seg[1].duration}};
  CVector start = CVector::Zero(7);
  start(nv::level::G0) = 1.0;
  const CVector y = numerics::ode_propagate_periodic(ode, start, 1);
  EXPECT_LT((y.real() - phi.monodromy().col(nv::level::G0)).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Grid, WeightsIntegratePiecewiseFunctions) {
  const auto phi = make_schedule(kRates, config(1.0, 0.3));
  const TimeGrid grid = make_grid(phi, 96);
  ASSERT_EQ(grid.segments.size(), 2u);
  const auto w = grid.weights();
  EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 0.3, 1e-14);
  // Step function: 2 on the first segment, 0 after; both boundary samples present.
  double step = 0.0;
  for (std::size_t k = grid.segments[0].first; k <= grid.segments[0].second; ++k) step += 2.0 * w[k];
  EXPECT_NEAR(step, 0.2, 1e-14);
  EXPECT_EQ(grid.t[grid.segments[0].second], grid.t[grid.segments[1].first]);
}

TEST(Response, UndrivenFixedPointIsPeriodic) {
  const auto phi = make_schedule(kRates, config(0.76, 0.06));
  const RVector rho = undriven_fixed_point(phi);
  EXPECT_NEAR(rho.sum(), 1.0, 1e-12);
  EXPECT_LT((phi.monodromy() * rho - rho).cwiseAbs().maxCoeff(), 1e-12);
  const RVector nu = drive_vector();
  EXPECT_EQ(nu(nv::level::G0), -1.0);
  EXPECT_EQ(nu(nv::level::Gp1), 1.0);
  EXPECT_EQ(nu.sum(), 0.0);
}

TEST(Response, PeriodicSolutionMatchesLongTimeOde) {
  const double rate0 = 0.8;
  const auto phi = make_schedule(kRates, config(1.0, 0.3));
  const TimeGrid grid = make_grid(phi, 96);
  std::vector<double> rate(grid.size(), 0.0);
  for (std::size_t k = grid.segments[0].first; k <= grid.segments[0].second; ++k) rate[k] = rate0;
  const auto resp = periodic_response(phi, grid, rate);

  // Affine system on an augmented state (sigma, 1).
  const auto seg = phi.schedule();
  CMatrix drive = CMatrix::Zero(8, 8);
  drive.topLeftCorner(7, 7) = seg[0].generator.cast<Complex>();
  drive.col(7).head(7) = (rate0 * drive_vector()).cast<Complex>();
  CMatrix relax = CMatrix::Zero(8, 8);
  relax.topLeftCorner(7, 7) = seg[1].generator.cast<Complex>();
  const std::array<numerics::GeneratorSegment, 2> ode = {
      numerics::GeneratorSegment{drive, seg[0].duration},
      numerics::GeneratorSegment{relax, seg[1].duration}};
  CVector y = CVector::Zero(8);
  y.head(7) = resp.rho0.cast<Complex>();
  y(7) = 1.0;
  y = numerics::ode_propagate_periodic(ode, y, 600);
  EXPECT_LT((y.head(7).real() - resp.sigma.front()).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LT((resp.sigma.front() - resp.sigma.back()).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_NEAR(resp.sigma_tilde0.sum(), 0.0, 1e-12);

  const auto trace = synthesize_fluorescence(resp);
  EXPECT_GT(trace.relative_drop, 0.0);
  EXPECT_NEAR(trace.relative_drop, (trace.mean_F0 - trace.mean_F) / trace.mean_F0, 1e-15);
}

TEST(Response, DropIsLinearInRate) {
  const auto phi = make_schedule(kRates, config(0.76, 0.06));
  const TimeGrid grid = make_grid(phi, 64);
  std::vector<double> rate(grid.size(), 0.0);
  for (std::size_t k = 0; k <= grid.segments[0].second; ++k) rate[k] = 0.3;
  const double d1 = synthesize_fluorescence(periodic_response(phi, grid, rate)).relative_drop;
  for (auto& r : rate) r *= 2.0;
  const double d2 = synthesize_fluorescence(periodic_response(phi, grid, rate)).relative_drop;
  EXPECT_NEAR(d2 / d1, 2.0, 1e-10);
  EXPECT_THROW(periodic_response(phi, grid, std::vector<double>(3, 0.0)), DimensionError);
}

TEST(Kappa, PositiveOrderedAndFlatKernel) {
  KappaConfig two = config(0.76, 0.06);
  KappaConfig cont = two;
  cont.schedule = Schedule::continuous;
  const auto k2 = kappa(kRates, two);
  const auto kc = kappa(kRates, cont);
  EXPECT_GT(k2.kappa, 0.0);
  EXPECT_GT(kc.kappa, k2.kappa);
  EXPECT_LE(k2.H_variation, 1e-3);
  KappaConfig low = two;
  low.pump = 0.38;
  EXPECT_LT(kappa(kRates, low).kappa, k2.kappa);
  EXPECT_THROW(kappa(kRates, two, 0.0), KernelError);
}

TEST(Kappa, PowerConversionAndCsv) {
  KappaResult k;
  k.kappa = 0.3;
  EXPECT_NEAR(power_from_fluorescence(0.01, k), 2.0 * 3.14159265358979 * 2600.0 * 0.003, 1e-9);
  std::ostringstream out;
  write_kappa_csv(out, {k});
  EXPECT_EQ(out.str().rfind("gamma_mhz,kappa_mhz,mode,sigma\n", 0), 0u);
}

}  // namespace
}  // namespace nvqhe::fluorescence
