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

#include "nvqhe/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <queue>
#include <string>
#include <tuple>

#include <Eigen/Eigenvalues>

#include "nvqhe/errors.hpp"

namespace nvqhe::quadrature {

namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

double magnitude(double x) { return std::abs(x); }
double magnitude(const RVector& x) { return x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff(); }

template <typename T>
struct Segment {
  double a, b;
  T value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <typename T, typename F>
Segment<T> gk15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const T fc = f(c);
  T kron = kWgk[7] * fc;
  T gauss = kWg[3] * fc;
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const T s = f(c - dx) + f(c + dx);
    kron = kron + kWgk[j] * s;
    if (j % 2 == 1) gauss = gauss + kWg[j / 2] * s;
  }
  const T value = kron * h;
  return {a, b, value, magnitude(T((kron - gauss) * h))};
}

template <typename T, typename F>
std::tuple<T, double, std::size_t> adaptive_impl(const F& f, double a, double b,
                                                 std::span<const double> breakpoints,
                                                 const AdaptiveOptions& options) {
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("integrate_adaptive: non-finite limits");
  }
  const double sign = b > a ? 1.0 : -1.0;
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);

  std::vector<double> cuts = {lo};
  for (double p : breakpoints) {
    if (p > lo && p < hi) cuts.push_back(p);
  }
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<Segment<T>> heap;
  std::size_t evaluations = 0;
  std::optional<T> value;
  double error = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Segment<T> s = gk15<T>(f, cuts[i], cuts[i + 1]);
    evaluations += 15;
    value = value ? T(*value + s.value) : s.value;
    error += s.error;
    heap.push(std::move(s));
  }
  while (!heap.empty() &&
         error > std::max(options.abs_tol, options.rel_tol * magnitude(*value)) &&
         heap.size() < options.max_intervals) {
    const Segment<T> worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) break;
    heap.pop();
    Segment<T> left = gk15<T>(f, worst.a, mid);
    Segment<T> right = gk15<T>(f, mid, worst.b);
    evaluations += 30;
    value = T(*value + left.value + right.value - worst.value);
    error += left.error + right.error - worst.error;
    heap.push(std::move(left));
    heap.push(std::move(right));
  }
  // Re-sum to shed the drift of the incremental updates.
  std::optional<T> total;
  error = 0.0;
  while (!heap.empty()) {
    total = total ? T(*total + heap.top().value) : heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  return {T(sign * *total), error, evaluations};
}

template <typename T, typename F>
T gauss_window_average(const F& f, double fwhm, std::span<const double> breakpoints,
                       const AdaptiveOptions& options) {
  const double sigma = fwhm_to_sigma(fwhm);
  const double limit = options.width_sigmas * sigma;
  const double norm = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * sigma);
  const auto weighted = [&](double x) -> T {
    return T(f(x) * (norm * std::exp(-0.5 * (x / sigma) * (x / sigma))));
  };
  return std::get<0>(adaptive_impl<T>(weighted, -limit, limit, breakpoints, options));
}

void require_fwhm(double fwhm, const char* what) {
  if (!(fwhm >= 0.0) || !std::isfinite(fwhm)) {
    throw DomainError(std::string(what) + ": fwhm must be finite and >= 0");
  }
}

}  // namespace

Rule gauss_hermite_rule(std::size_t n) {
  if (n == 0) throw DomainError("gauss_hermite_rule: n must be >= 1");
  // Jacobi matrix of the probabilists' Hermite recurrence: off-diagonal sqrt(k).
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                              static_cast<Eigen::Index>(n));
  for (std::size_t k = 1; k < n; ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    jac(i, i - 1) = jac(i - 1, i) = std::sqrt(static_cast<double>(k));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jac);
  Rule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    rule.nodes[k] = solver.eigenvalues()(i);
    const double v0 = solver.eigenvectors()(0, i);
    rule.weights[k] = v0 * v0;
    total += rule.weights[k];
  }
  for (double& w : rule.weights) w /= total;
  // Symmetrize so odd moments vanish to rounding.
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double x = 0.5 * (rule.nodes[n - 1 - k] - rule.nodes[k]);
    const double w = 0.5 * (rule.weights[k] + rule.weights[n - 1 - k]);
    rule.nodes[k] = -x;
    rule.nodes[n - 1 - k] = x;
    rule.weights[k] = rule.weights[n - 1 - k] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

double fwhm_to_sigma(double fwhm) {
  return fwhm / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
}

double gauss_average(const ScalarFn& f, double fwhm, std::size_t n_points) {
  require_fwhm(fwhm, "gauss_average");
  if (fwhm == 0.0) return f(0.0);
  const double sigma = fwhm_to_sigma(fwhm);
  const Rule rule = gauss_hermite_rule(n_points);
  double acc = 0.0;
  for (std::size_t k = 0; k < n_points; ++k) acc += rule.weights[k] * f(sigma * rule.nodes[k]);
  return acc;
}

AdaptiveResult integrate_adaptive(const ScalarFn& f, double a, double b,
                                  std::span<const double> breakpoints,
                                  const AdaptiveOptions& options) {
  AdaptiveResult result;
  if (a == b) return result;
  std::tie(result.value, result.error, result.evaluations) =
      adaptive_impl<double>(f, a, b, breakpoints, options);
  return result;
}

AdaptiveVectorResult integrate_adaptive(const VectorFn& f, double a, double b,
                                        std::span<const double> breakpoints,
                                        const AdaptiveOptions& options) {
  AdaptiveVectorResult result;
  if (a == b) {
    result.value = RVector::Zero(f(a).size());
    return result;
  }
  std::tie(result.value, result.error, result.evaluations) =
      adaptive_impl<RVector>(f, a, b, breakpoints, options);
  return result;
}

double adaptive_gauss_average(const ScalarFn& f, double fwhm,
                              std::span<const double> breakpoints,
                              const AdaptiveOptions& options) {
  require_fwhm(fwhm, "adaptive_gauss_average");
  if (fwhm == 0.0) return f(0.0);
  return gauss_window_average<double>(f, fwhm, breakpoints, options);
}

RVector adaptive_gauss_average(const VectorFn& f, double fwhm,
                               std::span<const double> breakpoints,
                               const AdaptiveOptions& options) {
  require_fwhm(fwhm, "adaptive_gauss_average");
  if (fwhm == 0.0) return f(0.0);
  return gauss_window_average<RVector>(f, fwhm, breakpoints, options);
}

std::vector<double> comb_breakpoints(double period, double limit) {
  std::vector<double> pts = {0.0};
  if (!(period > 0.0) || !(limit > 0.0)) return pts;
  const double spacing = 2.0 * std::numbers::pi / period;
  for (int k = 1; k * spacing < limit && k < 100000; ++k) {
    pts.push_back(k * spacing);
    pts.push_back(-k * spacing);
  }
  std::sort(pts.begin(), pts.end());
  return pts;
}

std::vector<double> sample_weights(std::size_t n, double h) {
  if (n < 2) throw DomainError("sample_weights: need at least two samples");
  std::vector<double> w(n, 0.0);
  const std::size_t intervals = n - 1;
  if (intervals == 1) {
    w[0] = w[1] = 0.5 * h;
    return w;
  }
  const std::size_t simpson_end = intervals % 2 == 0 ? intervals : intervals - 3;
  for (std::size_t i = 0; i + 2 <= simpson_end; i += 2) {
    w[i] += h / 3.0;
    w[i + 1] += 4.0 * h / 3.0;
    w[i + 2] += h / 3.0;
  }
  if (simpson_end != intervals) {
    const std::size_t i = simpson_end;
    w[i] += 3.0 * h / 8.0;
    w[i + 1] += 9.0 * h / 8.0;
    w[i + 2] += 9.0 * h / 8.0;
    w[i + 3] += 3.0 * h / 8.0;
  }
  return w;
}

double integrate_samples(std::span<const double> samples, double h) {
  const std::vector<double> w = sample_weights(samples.size(), h);
  double acc = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) acc += w[i] * samples[i];
  return acc;
}

}  // namespace nvqhe::quadrature
