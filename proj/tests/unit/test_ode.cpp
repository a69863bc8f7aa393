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
#include <random>

#include <gtest/gtest.h>

#include "nvqhe/errors.hpp"
#include "nvqhe/ode.hpp"

namespace nvqhe::numerics {
namespace {

TEST(Ode, ExponentialDecayClosedForm) {
  CMatrix g(1, 1);
  g(0, 0) = -3.0;
  CVector y0(1);
  y0(0) = 2.0;
  const CVector y = ode_propagate(g, y0, 1.5);
  EXPECT_NEAR(y(0).real(), 2.0 * std::exp(-4.5), 1e-9 * 2.0 * std::exp(-4.5));
}

TEST(Ode, HarmonicOscillatorConservesEnergy) {
  CMatrix g = CMatrix::Zero(2, 2);
  g(0, 1) = 1.0;
  g(1, 0) = -1.0;
  CVector y0(2);
  y0 << 1.0, 0.0;
  const double t = 10.0;
  const CVector y = ode_propagate(g, y0, t);
  EXPECT_NEAR(y(0).real(), std::cos(t), 1e-8);
  EXPECT_NEAR(y(1).real(), -std::sin(t), 1e-8);
}

TEST(Ode, TimeDependentGenerator) {
  // y' = t y  ->  y = exp(t^2 / 2).
  const Generator gen = [](double t) {
    CMatrix g(1, 1);
    g(0, 0) = t;
    return g;
  };
  CVector y0(1);
  y0(0) = 1.0;
  const CVector y = ode_propagate(gen, y0, 0.0, 2.0);
  EXPECT_NEAR(y(0).real(), std::exp(2.0), 1e-8 * std::exp(2.0));
}

TEST(Ode, BackwardIntegrationInvertsForward) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0.0, 1.0);
  CMatrix g(3, 3);
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = 0; j < 3; ++j) g(i, j) = Complex(n(rng), n(rng));
  const Generator gen = [&](double) { return g; };
  CVector y0 = CVector::Ones(3);
  const CVector fwd = ode_propagate(gen, y0, 0.0, 0.8);
  const CVector back = ode_propagate(gen, fwd, 0.8, 0.0);
  EXPECT_LT((back - y0).norm(), 1e-8);
}

TEST(Ode, PeriodicScheduleMatchesSegmentProducts) {
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 1) = 1.0;
  a(1, 0) = -1.0;
  CMatrix b = CMatrix::Zero(2, 2);
  b(0, 0) = -0.5;
  b(1, 1) = -0.1;
  const std::array<GeneratorSegment, 3> schedule = {
      GeneratorSegment{a, 0.3}, GeneratorSegment{b, 0.0}, GeneratorSegment{b, 0.2}};
  CVector y0(2);
  y0 << 1.0, 2.0;
  const CVector y = ode_propagate_periodic(schedule, y0, 5);
  const CMatrix cycle = mat_exp(b, 0.2) * mat_exp(a, 0.3);
  CMatrix u = CMatrix::Identity(2, 2);
  for (int i = 0; i < 5; ++i) u = cycle * u;
  EXPECT_LT((y - u * y0).norm(), 1e-9);
}

TEST(Ode, StepUnderflowRaisesStiffness) {
  CMatrix g(1, 1);
  g(0, 0) = -1e9;
  CVector y0(1);
  y0(0) = 1.0;
  OdeOptions opts;
  opts.min_step = 1e-3;
  EXPECT_THROW(ode_propagate(g, y0, 1.0, opts), StiffnessError);
}

TEST(Ode, RejectsBadInputs) {
  CVector y0 = CVector::Ones(2);
  EXPECT_THROW(ode_propagate(CMatrix::Zero(3, 3), y0, 1.0), DimensionError);
  const std::array<GeneratorSegment, 1> schedule = {GeneratorSegment{CMatrix::Zero(2, 2), -1.0}};
  EXPECT_THROW(ode_propagate_periodic(schedule, y0, 1), DomainError);
  EXPECT_THROW(ode_propagate([](double) { return CMatrix(CMatrix::Zero(2, 2)); }, y0, 0.0,
                             std::nan("")),
               DomainError);
}

}  // namespace
}  // namespace nvqhe::numerics
