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

#include "nvqhe/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nvqhe/errors.hpp"

namespace nvqhe::numerics {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

template <typename Rhs>
CVector integrate(Rhs&& rhs, const CVector& y0, double t0, double t1,
                  double scale_hint, const OdeOptions& opt) {
  if (!std::isfinite(t0) || !std::isfinite(t1)) {
    throw DomainError("ode_propagate: non-finite time span");
  }
  CVector y = y0;
  if (t1 == t0) return y;
  const double direction = t1 > t0 ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);

  double h = span;
  if (scale_hint > 0.0) h = std::min(h, 0.01 / scale_hint);
  h = std::max(h, 10.0 * opt.min_step);

  double t = t0;
  CVector k1 = rhs(t, y);
  CVector k2, k3, k4, k5, k6, k7, y_new, err;
  std::size_t steps = 0;
  while (direction * (t1 - t) > 0.0) {
    if (++steps > opt.max_steps) {
      throw StiffnessError("ode_propagate: exceeded maximum step count");
    }
    const double remaining = std::abs(t1 - t);
    bool last = false;
    if (h >= remaining) {
      h = remaining;
      last = true;
    }
    const double hs = direction * h;
    k2 = rhs(t + c2 * hs, y + hs * (a21 * k1));
    k3 = rhs(t + c3 * hs, y + hs * (a31 * k1 + a32 * k2));
    k4 = rhs(t + c4 * hs, y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
    k5 = rhs(t + c5 * hs, y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    k6 = rhs(t + hs, y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    y_new = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    k7 = rhs(t + hs, y_new);
    err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double acc = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double sc = opt.abs_tol + opt.rel_tol * std::max(std::abs(y(i)), std::abs(y_new(i)));
      const double r = std::abs(err(i)) / sc;
      acc += r * r;
    }
    const double err_norm = y.size() > 0 ? std::sqrt(acc / static_cast<double>(y.size())) : 0.0;

    if (err_norm <= 1.0) {
      t = last ? t1 : t + hs;
      y = y_new;
      k1 = k7;
      const double factor =
          err_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
      h *= factor;
    } else {
      h *= std::clamp(0.9 * std::pow(err_norm, -0.2), 0.1, 0.9);
      if (h < opt.min_step) {
        throw StiffnessError("ode_propagate: step size underflow at t = " + std::to_string(t));
      }
    }
  }
  return y;
}

}  // namespace

CVector ode_propagate(const Generator& generator, const CVector& y0, double t0,
                      double t1, const OdeOptions& options) {
  const CMatrix g0 = generator(t0);
  if (g0.rows() != y0.size() || g0.cols() != y0.size()) {
    throw DimensionError("ode_propagate: generator and state dimensions differ");
  }
  const double hint = g0.size() > 0 ? g0.cwiseAbs().maxCoeff() : 0.0;
  return integrate([&](double t, const CVector& y) -> CVector { return generator(t) * y; },
                   y0, t0, t1, hint, options);
}

CVector ode_propagate(const CMatrix& generator, const CVector& y0, double duration,
                      const OdeOptions& options) {
  require_square(generator, "ode_propagate");
  if (generator.rows() != y0.size()) {
    throw DimensionError("ode_propagate: generator and state dimensions differ");
  }
  const double hint = generator.size() > 0 ? generator.cwiseAbs().maxCoeff() : 0.0;
  return integrate([&](double, const CVector& y) -> CVector { return generator * y; },
                   y0, 0.0, duration, hint, options);
}

CVector ode_propagate_periodic(std::span<const GeneratorSegment> schedule,
                               const CVector& y0, std::size_t periods,
                               const OdeOptions& options) {
  CVector y = y0;
  for (std::size_t p = 0; p < periods; ++p) {
    for (const auto& seg : schedule) {
      if (seg.duration < 0.0) throw DomainError("ode_propagate_periodic: negative duration");
      if (seg.duration == 0.0) continue;
      y = ode_propagate(seg.generator, y, seg.duration, options);
    }
  }
  return y;
}

}  // namespace nvqhe::numerics
