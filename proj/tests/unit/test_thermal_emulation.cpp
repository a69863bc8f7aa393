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

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "nvqhe/errors.hpp"
#include "nvqhe/numerics.hpp"
#include "nvqhe/thermal_emulation.hpp"

namespace nvqhe::thermal {
namespace {

const nv::RateConstants kRates{};

TEST(ThermalOperator, ReproducesSlowSpectrum) {
  for (double pump : {0.1, 0.5, 0.76}) {
    const ThermalOperator op = thermal_operator(kRates, pump);
    const auto e = numerics::eig(op.raw);
    for (Eigen::Index i = 0; i < 4; ++i) {
      EXPECT_NEAR(e.values(i).real(), op.slow_eigenvalues(i), 1e-9 * (1.0 + std::abs(e.values(i))));
    }
    EXPECT_LT(op.corrected.colwise().sum().cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_TRUE(check_invariants(op.corrected).rates_valid(1e-9)) << pump;
  }
}

TEST(ThermalOperator, SlowEigenvectorsProjectOntoReducedBasis) {
  const RMatrix m = nv::optical_matrix(kRates, 0.5);
  const SlowFastPartition part = partition_eigenpairs(m);
  EXPECT_GE(part.margin, 2.0);
  const ThermalOperator op = build_L(m);
  const RMatrix p = reduction_projector();
  for (Eigen::Index k = 0; k < 4; ++k) {
    const CVector v = p.cast<Complex>() * part.slow.vectors.col(k);
    const CVector lhs = op.raw.cast<Complex>() * v;
    EXPECT_LT((lhs - part.slow.values(k) * v).norm(), 1e-9);
  }
}

TEST(ThermalOperator, ExpansionMatchesPrintedTables) {
  const double L0[4][4] = {{-0.05, 0, 0, 0.97},
                           {0, -0.22, 0, 0.36},
                           {0, 0, -0.22, 0.36},
                           {0.05, 0.22, 0.22, -1.71}};
  const double L1[4][4] = {{-0.11, 0, 0, -0.01},
                           {0, -0.45, 0, 0},
                           {0, 0, -0.45, 0},
                           {0.11, 0.45, 0.45, 0}};
  const RMatrix l0 = thermal_operator(kRates, 0.5).corrected;
  const RMatrix l1 = linear_expansion(kRates, 0.5, 0.01, Variant::raw).L1;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      EXPECT_NEAR(l0(i, j), L0[i][j], 0.01) << i << "," << j;
      EXPECT_NEAR(l1(i, j), L1[i][j], 0.01) << i << "," << j;
    }
  }
}

TEST(ThermalOperator, LinearExpansionIsCentralDifference) {
  const auto lin = linear_expansion(kRates, 0.5, 0.01, Variant::corrected);
  const RMatrix up = thermal_operator(kRates, 0.51).corrected;
  const RMatrix dn = thermal_operator(kRates, 0.49).corrected;
  EXPECT_LT((lin.L1 - (up - dn) / 0.02).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((lin.evaluate(0.5) - thermal_operator(kRates, 0.5).corrected).cwiseAbs().maxCoeff(),
            1e-12);
}

TEST(ThermalOperator, ConservePopulationClosedForm) {
  RMatrix l(2, 2);
  l << -1.0, 2.0, 3.0, -1.5;
  RMatrix expected(2, 2);
  expected << -3.0, 2.0, 3.0, -2.0;
  EXPECT_LT((conserve_population(l) - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ThermalOperator, PartitionFailsAtExtremePump) {
  EXPECT_THROW(partition_eigenpairs(nv::optical_matrix(kRates, 200.0)), PartitionError);
}

TEST(Emulation, ErrorVanishesAtStartAndStaysBounded) {
  const RVector s0 = emulation_start_state(0.005);
  EXPECT_NEAR(s0.sum(), 1.0, 1e-15);
  EXPECT_NEAR(nv::fluorescence_rate(s0), 0.005, 1e-15);
  const RMatrix m = nv::optical_matrix(kRates, 0.5);
  const RMatrix l = thermal_operator(kRates, 0.5).raw;
  EXPECT_NEAR(emulation_error(m, l, s0, 0.0), 0.0, 1e-12);
  const auto surface = emulation_error_surface(kRates, s0, {0.0, 0.25, 0.5, 1.0},
                                               {0.0, 0.5, 1.0, 5.0, 10.0});
  EXPECT_LE(surface.max_percent, 0.5 + 1e-6);
  std::ostringstream csv;
  write_emulation_csv(csv, surface);
  EXPECT_EQ(csv.str().rfind("gamma_mhz,t_us,percent_error\n", 0), 0u);
}

TEST(Baths, RatesFromOperatorEntries) {
  RMatrix l = RMatrix::Zero(4, 4);
  l(3, 0) = 0.1;
  l(0, 3) = 0.9;
  l(3, 1) = 0.2;
  l(1, 3) = 0.3;
  l(3, 2) = 0.25;
  l(2, 3) = 0.35;
  const BathRates b = bath_rates(l);
  EXPECT_DOUBLE_EQ(b.cold, 1.0);
  EXPECT_DOUBLE_EQ(b.hot, 1.1);
  EXPECT_DOUBLE_EQ(pump_transfer_rate(l), 0.35);
  EXPECT_THROW(bath_rates(RMatrix::Zero(3, 3)), DimensionError);
}

TEST(Baths, PumpSolverInvertsTransferRate) {
  for (double pump : {0.36, 0.76, 3.0}) {
    const double target = pump_transfer_rate(thermal_operator(kRates, pump).corrected);
    EXPECT_NEAR(solve_pump_for_transfer_rate(kRates, target), pump, 1e-6 * pump);
  }
  EXPECT_THROW(solve_pump_for_transfer_rate(kRates, 1e6), ConstraintError);
}

TEST(Baths, EffectiveTemperaturesHotterThanCold) {
  const auto t = nv::effective_temperatures(thermal_operator(kRates, 0.5).corrected);
  EXPECT_TRUE(t.hot.inverted || t.hot.infinite || t.hot.kelvin > t.cold.kelvin);
}

}  // namespace
}  // namespace nvqhe::thermal
