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

#include "nvqhe/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nvqhe/errors.hpp"
#include "nvqhe/parallel.hpp"

namespace nvqhe::uncertainty {

namespace {

double truncated(std::mt19937_64& gen, double mean, double sigma) {
  if (sigma < 0.0 || !std::isfinite(sigma)) throw DomainError("draw: invalid sigma");
  if (sigma == 0.0) return mean;
  std::normal_distribution<double> dist(mean, sigma);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    const double x = dist(gen);
    if (x >= 0.0) return x;
  }
  throw DomainError("draw: truncated normal rejection failed");
}

double percentile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

ParameterPriors ParameterPriors::from(const nv::RateConstants& rc,
                                      const nv::CalibrationParams& cal) {
  ParameterPriors p;
  p.rates = rc;
  p.r_khz_per_mw = cal.r_khz_per_mw;
  p.r_sigma = cal.r_sigma;
  p.rabi_per_sqrt_mw = cal.rabi_per_sqrt_mw;
  p.rabi_sigma = cal.rabi_sigma;
  return p;
}

ParameterSample draw(const ParameterPriors& priors, std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 gen(seq);
  const auto& r = priors.rates;
  ParameterSample s;
  s.rates = r;
  s.rates.gamma = truncated(gen, r.gamma, r.gamma_sigma);
  s.rates.k1s = truncated(gen, r.k1s, r.k1s_sigma);
  s.rates.k0s = truncated(gen, r.k0s, r.k0s_sigma);
  s.rates.ks0 = truncated(gen, r.ks0, r.ks0_sigma);
  s.rates.ks1 = truncated(gen, r.ks1, r.ks1_sigma);
  s.r_khz_per_mw = truncated(gen, priors.r_khz_per_mw, priors.r_sigma);
  s.rabi_per_sqrt_mw = truncated(gen, priors.rabi_per_sqrt_mw, priors.rabi_sigma);
  s.fwhm = truncated(gen, priors.fwhm, priors.fwhm_sigma);
  return s;
}

Statistics propagate(const Quantity& quantity, const ParameterPriors& priors,
                     std::size_t n_samples, std::uint64_t seed, std::size_t max_threads) {
  if (n_samples < 100) throw DomainError("propagate: need at least 100 samples");
  const auto results = parallel_map(
      n_samples,
      [&](std::size_t i) -> std::optional<double> {
        try {
          const double v = quantity(draw(priors, seed, i));
          if (std::isfinite(v)) return v;
        } catch (const Error&) {
        }
        return std::nullopt;
      },
      max_threads);

  std::vector<double> values;
  values.reserve(n_samples);
  for (const auto& r : results) {
    if (r) values.push_back(*r);
  }
  Statistics st;
  st.seed = seed;
  st.n_samples = n_samples;
  st.n_failed = n_samples - values.size();
  if (static_cast<double>(st.n_failed) > 0.01 * static_cast<double>(n_samples)) {
    throw PropagationError("propagate: " + std::to_string(st.n_failed) + " of " +
                           std::to_string(n_samples) + " evaluations failed");
  }
  const auto n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  st.mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - st.mean) * (v - st.mean);
  st.sigma = std::sqrt(ss / (n - 1.0));
  std::sort(values.begin(), values.end());
  st.p025 = percentile(values, 0.025);
  st.p16 = percentile(values, 0.16);
  st.median = percentile(values, 0.5);
  st.p84 = percentile(values, 0.84);
  st.p975 = percentile(values, 0.975);
  return st;
}

double normal_tail(double t) { return 0.5 * std::erfc(t / std::sqrt(2.0)); }

TestResult bound_violation_test(double p_measured, double sigma_measured, double p_bound,
                                double sigma_bound) {
  if (!(sigma_measured > 0.0) || !(sigma_bound > 0.0)) {
    throw DomainError("bound_violation_test: sigmas must be positive");
  }
  TestResult r;
  r.t = (p_measured - p_bound) / std::hypot(sigma_measured, sigma_bound);
  r.p = normal_tail(r.t);
  return r;
}

}  // namespace nvqhe::uncertainty
