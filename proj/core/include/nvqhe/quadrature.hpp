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

// Quadrature: Gaussian averages over detuning and sampled-grid integration.

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "nvqhe/numerics.hpp"

namespace nvqhe::quadrature {

using ScalarFn = std::function<double(double)>;
using VectorFn = std::function<RVector(double)>;

/// Nodes and weights for E[f(X)], X ~ N(0, 1). Weights sum to 1.
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Hermite (probabilists') rule via Golub-Welsch. n >= 1.
Rule gauss_hermite_rule(std::size_t n);

/// Standard deviation of a Gaussian with the given full width at half maximum.
double fwhm_to_sigma(double fwhm);

/// E[f(delta)] for delta ~ N(0, sigma(fwhm)) with an n-point Gauss-Hermite
/// rule. fwhm == 0 returns f(0); negative fwhm throws DomainError.
double gauss_average(const ScalarFn& f, double fwhm, std::size_t n_points = 41);

struct AdaptiveOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-9;
  double width_sigmas = 8.0;  // integration window is +-width_sigmas * sigma
  std::size_t max_intervals = 20000;
};

struct AdaptiveResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
};

/// Globally adaptive Gauss-Kronrod (7/15) on [a, b]. Breakpoints inside the
/// interval seed the initial partition.
AdaptiveResult integrate_adaptive(const ScalarFn& f, double a, double b,
                                  std::span<const double> breakpoints = {},
                                  const AdaptiveOptions& options = {});

struct AdaptiveVectorResult {
  RVector value;
  double error = 0.0;  // summed max-norm error estimate
  std::size_t evaluations = 0;
};

/// Vector-valued variant; refinement is driven by the max-norm error.
AdaptiveVectorResult integrate_adaptive(const VectorFn& f, double a, double b,
                                        std::span<const double> breakpoints = {},
                                        const AdaptiveOptions& options = {});

/// E[f(delta)] for a Gaussian of the given FWHM, integrated adaptively over
/// the truncated window. Use when f has features narrower than the rule
/// spacing of gauss_average. fwhm == 0 returns f(0).
double adaptive_gauss_average(const ScalarFn& f, double fwhm,
                              std::span<const double> breakpoints = {},
                              const AdaptiveOptions& options = {});

RVector adaptive_gauss_average(const VectorFn& f, double fwhm,
                               std::span<const double> breakpoints = {},
                               const AdaptiveOptions& options = {});

/// Breakpoints at 0 and at +-2 pi k / period inside +-limit.
std::vector<double> comb_breakpoints(double period, double limit);

/// Integral of uniformly spaced samples with spacing h. Composite Simpson,
/// with a trailing 3/8 panel when the interval count is odd. Needs >= 2
/// samples (2 samples: trapezoid).
double integrate_samples(std::span<const double> samples, double h);

/// Weights w with sum_i w_i samples_i == integrate_samples(samples, h).
std::vector<double> sample_weights(std::size_t n, double h);

}  // namespace nvqhe::quadrature
