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

// Monte-Carlo propagation of parameter uncertainties and the one-sided
// test for a measured power exceeding the stochastic bound.

#pragma once

#include <cstdint>
#include <functional>

#include "nvqhe/nv_model.hpp"

namespace nvqhe::uncertainty {

/// Nominal values and 1-sigma errors of every sampled parameter.
struct ParameterPriors {
  nv::RateConstants rates;  // nominal rates carry their own sigmas
  double r_khz_per_mw = 436.0;
  double r_sigma = 25.0;
  double rabi_per_sqrt_mw = nv::kTwoPi * 0.244;
  double rabi_sigma = nv::kTwoPi * 0.002;
  double fwhm = nv::kTwoPi * 7.0;  // Mrad/s
  double fwhm_sigma = 0.0;

  static ParameterPriors from(const nv::RateConstants& rc, const nv::CalibrationParams& cal);
};

/// One independent draw. Each parameter is Gaussian truncated to >= 0.
struct ParameterSample {
  nv::RateConstants rates;
  double r_khz_per_mw = 0.0;
  double rabi_per_sqrt_mw = 0.0;
  double fwhm = 0.0;
};

/// Draw number `index` of the stream identified by `seed`. Independent of
/// the order in which draws are requested.
ParameterSample draw(const ParameterPriors& priors, std::uint64_t seed, std::uint64_t index);

struct Statistics {
  double mean = 0.0;
  double sigma = 0.0;  // sample standard deviation
  double p025 = 0.0;
  double p16 = 0.0;
  double median = 0.0;
  double p84 = 0.0;
  double p975 = 0.0;
  std::size_t n_samples = 0;
  std::size_t n_failed = 0;
  std::uint64_t seed = 0;
};

using Quantity = std::function<double(const ParameterSample&)>;

/// Evaluates `quantity` on `n_samples` draws (n_samples >= 100). A draw fails
/// when the quantity throws nvqhe::Error or returns a non-finite value;
/// more than 1% failures raises PropagationError.
Statistics propagate(const Quantity& quantity, const ParameterPriors& priors,
                     std::size_t n_samples = 4096, std::uint64_t seed = 1,
                     std::size_t max_threads = 0);

/// 1 - Phi(t) for the standard normal.
double normal_tail(double t);

struct TestResult {
  double t = 0.0;
  double p = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
};

/// Null hypothesis P_measured - P_bound <= 0. Throws DomainError unless both
/// sigmas are positive.
TestResult bound_violation_test(double p_measured, double sigma_measured, double p_bound,
                                double sigma_bound);

}  // namespace nvqhe::uncertainty
