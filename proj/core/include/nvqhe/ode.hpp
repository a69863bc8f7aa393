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

// Adaptive Runge-Kutta integration of linear systems d/dt y = G(t) y.
//
// This is deliberately independent of mat_exp: it is the reference the
// propagator-based code paths are checked against.

#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "nvqhe/numerics.hpp"

namespace nvqhe::numerics {

struct OdeOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  double min_step = 1e-15;  // us; below this the problem is declared stiff
  std::size_t max_steps = 100'000'000;
};

using Generator = std::function<CMatrix(double)>;

/// y(t1) for d/dt y = generator(t) y, y(t0) = y0. Dormand-Prince 5(4) with
/// FSAL and RMS error control. Throws StiffnessError on step-size underflow.
CVector ode_propagate(const Generator& generator, const CVector& y0, double t0,
                      double t1, const OdeOptions& options = {});

/// Constant generator over `duration`; the stage matrix is formed once.
CVector ode_propagate(const CMatrix& generator, const CVector& y0, double duration,
                      const OdeOptions& options = {});

struct GeneratorSegment {
  CMatrix generator;
  double duration = 0.0;
};

/// Repeats the piecewise-constant schedule `periods` times, restarting the
/// integrator at every segment boundary.
CVector ode_propagate_periodic(std::span<const GeneratorSegment> schedule,
                               const CVector& y0, std::size_t periods,
                               const OdeOptions& options = {});

}  // namespace nvqhe::numerics
