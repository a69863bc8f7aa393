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
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "nvqhe/errors.hpp"
#include "nvqhe/quadrature.hpp"

namespace nvqhe::quadrature {
namespace {

constexpr double kPi = 3.14159265358979323846;

TEST(GaussHermite, WeightsSumToOneAndNodesSymmetric) {
  for (std::size_t n : {1u, 2u, 5u, 41u, 82u}) {
    const Rule r = gauss_hermite_rule(n);
    ASSERT_EQ(r.nodes.size(), n);
    EXPECT_NEAR(std::accumulate(r.weights.begin(), r.weights.end(), 0.0), 1.0, 1e-13);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NEAR(r.nodes[i], -r.nodes[n - 1 - i], 1e-12);
      EXPECT_GT(r.weights[i], 0.0);
    }
  }
}

TEST(GaussHermite, IntegratesStandardNormalMomentsExactly) {
  // E[X^(2k)] = (2k - 1)!!, exact up to degree 2n - 1.
  const Rule r = gauss_hermite_rule(10);
  double double_factorial = 1.0;
  for (int k = 1; k <= 9; ++k) {
    double_factorial *= 2.0 * k - 1.0;
    double m = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) m += r.weights[i] * std::pow(r.nodes[i], 2 * k);
    EXPECT_NEAR(m / double_factorial, 1.0, 1e-11) << "moment " << 2 * k;
  }
}

TEST(GaussAverage, CosineCharacteristicFunction) {
  const double fwhm = 2.0 * kPi * 7.0;
  const double sigma = fwhm_to_sigma(fwhm);
  EXPECT_NEAR(sigma, fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0))), 1e-14);
  const double a = 0.05;
  const double expected = std::exp(-0.5 * a * a * sigma * sigma);
  EXPECT_NEAR(gauss_average([&](double x) { return std::cos(a * x); }, fwhm), expected, 1e-12);
  EXPECT_NEAR(adaptive_gauss_average([&](double x) { return std::cos(a * x); }, fwhm), expected,
              1e-9);
}

TEST(GaussAverage, ZeroWidthAndNegativeWidth) {
  EXPECT_EQ(gauss_average([](double x) { return 3.0 + x; }, 0.0), 3.0);
  EXPECT_EQ(adaptive_gauss_average([](double x) { return 3.0 + x; }, 0.0), 3.0);
  EXPECT_THROW(gauss_average([](double) { return 1.0; }, -1.0), DomainError);
}

TEST(Adaptive, GaussianIntegralAndKink) {
  const auto r = integrate_adaptive([](double x) { return std::exp(-x * x); }, -10.0, 10.0);
  EXPECT_NEAR(r.value, std::sqrt(kPi), 1e-12);
  const std::vector<double> cut = {0.3};
  const auto k = integrate_adaptive([](double x) { return std::abs(x - 0.3); }, -1.0, 1.0, cut);
  EXPECT_NEAR(k.value, 0.5 * 1.3 * 1.3 + 0.5 * 0.7 * 0.7, 1e-13);
}

TEST(Adaptive, VectorMatchesScalarComponents) {
  const VectorFn f = [](double x) {
    RVector v(2);
    v << std::sin(x), x * x;
    return v;
  };
  const auto r = integrate_adaptive(f, 0.0, 2.0);
  EXPECT_NEAR(r.value(0), 1.0 - std::cos(2.0), 1e-12);
  EXPECT_NEAR(r.value(1), 8.0 / 3.0, 1e-12);
}

TEST(CombBreakpoints, SymmetricAndSpaced) {
  const auto cuts = comb_breakpoints(1.0, 7.0);
  ASSERT_EQ(cuts.size(), 3u);
  EXPECT_NEAR(cuts[0], -2.0 * kPi, 1e-12);
  EXPECT_EQ(cuts[1], 0.0);
  EXPECT_NEAR(cuts[2], 2.0 * kPi, 1e-12);
}

TEST(Samples, SimpsonExactForCubicsAnyIntervalCount) {
  for (std::size_t n : {3u, 4u, 5u, 8u, 9u, 258u}) {
    const double h = 2.0 / static_cast<double>(n - 1);
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = h * static_cast<double>(i);
      s[i] = x * x * x - 2.0 * x + 1.0;
    }
    EXPECT_NEAR(integrate_samples(s, h), 4.0 - 4.0 + 2.0, 1e-12) << n;
    const auto w = sample_weights(n, h);
    EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 2.0, 1e-13);
  }
  const std::vector<double> two = {1.0, 3.0};
  EXPECT_NEAR(integrate_samples(two, 0.5), 1.0, 1e-15);
}

TEST(Samples, ConvergesAtFourthOrder) {
  auto err = [](std::size_t n) {
    const double h = 1.0 / static_cast<double>(n - 1);
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = std::exp(h * static_cast<double>(i));
    return std::abs(integrate_samples(s, h) - (std::exp(1.0) - 1.0));
  };
  EXPECT_NEAR(std::log2(err(17) / err(33)), 4.0, 0.2);
}

}  // namespace
}  // namespace nvqhe::quadrature
